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

#pragma once

#include "faslab/types.hpp"

namespace faslab::numerics
{

struct LeastSquaresResult
{
    CVector coefficients;
    double residual_norm = 0.0;
    Eigen::Index effective_rank = 0;
};

/*!
 * Minimum-norm complex least squares: minimizes ||A x - b||_2 and, among all
 * minimizers, returns the one of smallest Euclidean norm. Rank deficiency is
 * handled by a rank-revealing orthogonal factorization whose pivots are
 * truncated below rel_tol times the largest one (the behavioral equivalent of
 * dropping singular values below rel_tol * sigma_max). An empty A yields empty
 * coefficients and residual ||b||.
 */
LeastSquaresResult least_squares(const CMatrix& A, const CVector& b, double rel_tol = 1e-10);

/*!
 * Largest singular value sqrt(lambda_max(A^H A)) estimated by power iteration
 * from a deterministic all-ones start vector; iterates until the estimate
 * changes by less than tol relatively or iters rounds have run.
 */
double spectral_norm(const CMatrix& A, int iters = 200, double tol = 1e-8);

enum class DftDirection
{
    Forward, // kernel exp(-j 2 pi a b / K)
    Inverse  // kernel exp(+j 2 pi a b / K)
};

/*!
 * Unitary discrete Fourier transform of fixed size: both directions carry the
 * 1/sqrt(K) normalization so each is the exact adjoint (and inverse) of the
 * other. Power-of-two sizes run an in-place radix-2 FFT over precomputed
 * twiddles; other sizes fall back to a cached dense kernel. Immutable after
 * construction and safe to share across threads.
 */
class UnitaryDft
{
  public:
    explicit UnitaryDft(int size);

    int size() const { return n_; }

    //! In-place transform of `data[0..size)`.
    void apply(cplx* data, DftDirection direction) const;

    CVector apply(const CVector& x, DftDirection direction) const
    {
        CVector y = x;
        apply(y.data(), direction);
        return y;
    }

  private:
    int n_;
    bool radix2_;
    std::vector<cplx> twiddles_; // forward-direction roots for the FFT path
    CMatrix dense_forward_;      // only populated on the non-power-of-two path
    std::vector<int> bitrev_;
};

//! One-shot unitary DFT of a vector (constructs the plan internally).
CVector dft_unitary(const CVector& x, DftDirection direction);

} // namespace faslab::numerics
