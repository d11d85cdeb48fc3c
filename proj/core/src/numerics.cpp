// SPDX-License-Identifier: Apache-2.0
//
// faslab - simulation and algorithm laboratory for wideband fluid-antenna receivers
// Copyright (C) 2026 the faslab contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "faslab/numerics.hpp"

#include <cmath>
#include <stdexcept>

namespace faslab::numerics
{

LeastSquaresResult least_squares(const CMatrix& A, const CVector& b, double rel_tol)
{
    if (A.rows() != b.size())
        throw std::invalid_argument("least_squares: row count does not match right-hand side");

    LeastSquaresResult result;
    if (A.cols() == 0)
    {
        result.coefficients = CVector();
        result.residual_norm = b.norm();
        result.effective_rank = 0;
        return result;
    }

    Eigen::CompleteOrthogonalDecomposition<CMatrix> cod(A.rows(), A.cols());
    cod.setThreshold(rel_tol);
    cod.compute(A);
    result.coefficients = cod.solve(b);
    result.effective_rank = cod.rank();
    result.residual_norm = (A * result.coefficients - b).norm();
    return result;
}

double spectral_norm(const CMatrix& A, int iters, double tol)
{
    if (A.size() == 0)
        throw std::invalid_argument("spectral_norm: empty matrix");

    CVector v = CVector::Ones(A.cols());
    v /= v.norm();
    double sigma = 0.0;
    for (int it = 0; it < iters; ++it)
    {
        CVector w = A * v;
        double next = w.norm();
        if (next == 0.0)
            return 0.0;
        CVector u = A.adjoint() * w;
        double un = u.norm();
        if (un == 0.0)
            return next;
        v = u / un;
        if (it > 0 && std::abs(next - sigma) <= tol * next)
        {
            sigma = next;
            break;
        }
        sigma = next;
    }
    return sigma;
}

namespace
{

bool is_power_of_two(int n)
{
    return n > 0 && (n & (n - 1)) == 0;
}

} // namespace

UnitaryDft::UnitaryDft(int size) : n_(size), radix2_(is_power_of_two(size))
{
    if (size < 1)
        throw std::invalid_argument("UnitaryDft: size must be >= 1");

    if (radix2_)
    {
        twiddles_.resize(static_cast<std::size_t>(n_ / 2));
        for (int i = 0; i < n_ / 2; ++i)
        {
            double ang = -2.0 * std::numbers::pi * i / n_;
            twiddles_[static_cast<std::size_t>(i)] = std::polar(1.0, ang);
        }
        bitrev_.resize(static_cast<std::size_t>(n_));
        int log2n = 0;
        while ((1 << log2n) < n_)
            ++log2n;
        for (int i = 0; i < n_; ++i)
        {
            int r = 0;
            for (int bit = 0; bit < log2n; ++bit)
                if (i & (1 << bit))
                    r |= 1 << (log2n - 1 - bit);
            bitrev_[static_cast<std::size_t>(i)] = r;
        }
    }
    else
    {
        dense_forward_.resize(n_, n_);
        for (int a = 0; a < n_; ++a)
            for (int b = 0; b < n_; ++b)
                dense_forward_(a, b) =
                    std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(a) * b / n_);
    }
}

void UnitaryDft::apply(cplx* data, DftDirection direction) const
{
    const bool inverse = direction == DftDirection::Inverse;
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_));

    if (!radix2_)
    {
        CVector x = Eigen::Map<const CVector>(data, n_);
        CVector y;
        if (inverse)
            y = dense_forward_.conjugate() * x;
        else
            y = dense_forward_ * x;
        for (int i = 0; i < n_; ++i)
            data[i] = y(i) * scale;
        return;
    }

    for (int i = 0; i < n_; ++i)
    {
        int j = bitrev_[static_cast<std::size_t>(i)];
        if (i < j)
            std::swap(data[i], data[j]);
    }
    for (int len = 2; len <= n_; len <<= 1)
    {
        const int half = len / 2;
        const int stride = n_ / len;
        for (int start = 0; start < n_; start += len)
        {
            for (int i = 0; i < half; ++i)
            {
                cplx w = twiddles_[static_cast<std::size_t>(i * stride)];
                if (inverse)
                    w = std::conj(w);
                cplx a = data[start + i];
                cplx b = data[start + i + half] * w;
                data[start + i] = a + b;
                data[start + i + half] = a - b;
            }
        }
    }
    for (int i = 0; i < n_; ++i)
        data[i] *= scale;
}

CVector dft_unitary(const CVector& x, DftDirection direction)
{
    UnitaryDft plan(static_cast<int>(x.size()));
    return plan.apply(x, direction);
}

} // namespace faslab::numerics
