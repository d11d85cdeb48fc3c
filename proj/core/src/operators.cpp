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

#include "faslab/operators.hpp"

#include <cmath>

#include "faslab/equalization.hpp"
#include "faslab/rng.hpp"

namespace faslab::op
{

namespace
{

void check_sorted_unique(const std::vector<int>& idx, int limit, const char* what)
{
    if (idx.empty())
        throw std::invalid_argument(std::string(what) + ": index set must be nonempty");
    int prev = -1;
    for (int i : idx)
    {
        if (i < 0 || i >= limit)
            throw std::invalid_argument(std::string(what) + ": index out of range");
        if (i <= prev)
            throw std::invalid_argument(std::string(what) + ": indices must be strictly increasing");
        prev = i;
    }
}

} // namespace

void SamplingPlan::validate(const SystemConfig& config) const
{
    check_sorted_unique(antenna_indices, config.M, "SamplingPlan antennas");
    check_sorted_unique(pilot_indices, config.K, "SamplingPlan pilots");
    if (pilot_symbols.size() != n_pilots())
        throw std::invalid_argument("SamplingPlan: one pilot symbol per pilot index required");
    for (Eigen::Index i = 0; i < pilot_symbols.size(); ++i)
        if (!(std::abs(pilot_symbols(i)) > 0.0))
            throw std::invalid_argument("SamplingPlan: pilot symbols must be nonzero");
}

SamplingPlan SamplingPlan::full(const SystemConfig& config)
{
    SamplingPlan plan;
    plan.antenna_indices.resize(static_cast<std::size_t>(config.M));
    plan.pilot_indices.resize(static_cast<std::size_t>(config.K));
    for (int m = 0; m < config.M; ++m)
        plan.antenna_indices[static_cast<std::size_t>(m)] = m;
    for (int k = 0; k < config.K; ++k)
        plan.pilot_indices[static_cast<std::size_t>(k)] = k;
    plan.pilot_symbols = CVector::Ones(config.K);
    return plan;
}

SamplingPlan SamplingPlan::random(const SystemConfig& config, int n_antennas, int n_pilots,
                                  std::uint64_t seed)
{
    if (n_antennas < 1 || n_antennas > config.M || n_pilots < 1 || n_pilots > config.K)
        throw std::invalid_argument("SamplingPlan::random: sizes outside the grid");
    Rng rng(seed);
    SamplingPlan plan;
    plan.antenna_indices = rng.sample_distinct(config.M, n_antennas);
    plan.pilot_indices = rng.sample_distinct(config.K, n_pilots);
    plan.pilot_symbols = CVector::Ones(n_pilots);
    return plan;
}

SamplingPlan SamplingPlan::equal_spaced_antennas(const SystemConfig& config, int n_antennas,
                                                 int n_pilots, std::uint64_t seed)
{
    if (n_antennas < 1 || n_antennas > config.M || n_pilots < 1 || n_pilots > config.K)
        throw std::invalid_argument("SamplingPlan::equal_spaced_antennas: sizes outside the grid");
    Rng rng(seed);
    SamplingPlan plan;
    plan.antenna_indices = eq::equal_spaced(config.M, n_antennas);
    plan.pilot_indices = rng.sample_distinct(config.K, n_pilots);
    plan.pilot_symbols = CVector::Ones(n_pilots);
    return plan;
}

CVector manifold_vector(const SystemConfig& config, double wavenumber, double omega_k)
{
    config.validate();
    CVector a(config.M);
    const double phase_step =
        config.aperture() * (omega_k + config.omega_c()) * wavenumber / (config.c * config.M);
    for (int m = 0; m < config.M; ++m)
        a(m) = std::polar(1.0, phase_step * m);
    return a;
}

MeasurementOperator::MeasurementOperator(const SystemConfig& config, SamplingPlan plan,
                                         std::size_t cache_capacity)
    : config_(config), plan_(std::move(plan)), dft_(config.K)
{
    config_.validate();
    plan_.validate(config_);

    const int M = config_.M;
    const int K = config_.K;
    manifolds_.reserve(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k)
    {
        CMatrix A(M, M);
        for (int q = 0; q < M; ++q)
            A.col(q) = manifold_vector(config_, config_.wavenumber(q), config_.omega(k));
        manifolds_.push_back(std::move(A));
    }

    const int N_r = plan_.n_antennas();
    selected_manifolds_.reserve(static_cast<std::size_t>(plan_.n_pilots()));
    for (int p = 0; p < plan_.n_pilots(); ++p)
    {
        const CMatrix& A = manifolds_[static_cast<std::size_t>(plan_.pilot_indices[p])];
        CMatrix rows(N_r, M);
        for (int r = 0; r < N_r; ++r)
            rows.row(r) = A.row(plan_.antenna_indices[static_cast<std::size_t>(r)]);
        selected_manifolds_.push_back(std::move(rows));
    }

    // |F(t,k)| = 1/sqrt(K) and |A(m,q)| = 1, so every measurement column has
    // squared norm N_r * sum_p |s_p|^2 / K regardless of its (q, t) location.
    double pilot_power = plan_.pilot_symbols.squaredNorm();
    column_norm_ = std::sqrt(static_cast<double>(N_r) * pilot_power / K);

    cache_.capacity = cache_capacity == 0 ? 4096 : cache_capacity;
}

CVector MeasurementOperator::apply_dictionary(const CVector& x) const
{
    const int M = config_.M;
    const int K = config_.K;
    if (x.size() != domain_dim())
        throw std::invalid_argument("apply_dictionary: domain length mismatch");

    // Psi: unitary DFT along the delay axis of each spatial row. The dictionary's
    // frequency kernel is exp(+j 2 pi t k / K), the Inverse direction of the plan.
    CMatrix X = Eigen::Map<const CMatrix>(x.data(), M, K);
    CVector row(K);
    for (int m = 0; m < M; ++m)
    {
        row = X.row(m).transpose();
        dft_.apply(row.data(), numerics::DftDirection::Inverse);
        X.row(m) = row.transpose();
    }

    // Omega: per-frequency manifold mixing of each column.
    CVector g(domain_dim());
    Eigen::Map<CMatrix> G(g.data(), M, K);
    for (int k = 0; k < K; ++k)
        G.col(k).noalias() = manifolds_[static_cast<std::size_t>(k)] * X.col(k);
    return g;
}

CVector MeasurementOperator::apply_dictionary_adjoint(const CVector& g) const
{
    const int M = config_.M;
    const int K = config_.K;
    if (g.size() != domain_dim())
        throw std::invalid_argument("apply_dictionary_adjoint: domain length mismatch");

    Eigen::Map<const CMatrix> G(g.data(), M, K);
    CMatrix X(M, K);
    for (int k = 0; k < K; ++k)
        X.col(k).noalias() = manifolds_[static_cast<std::size_t>(k)].adjoint() * G.col(k);

    CVector x(domain_dim());
    Eigen::Map<CMatrix> Xout(x.data(), M, K);
    CVector row(K);
    for (int m = 0; m < M; ++m)
    {
        row = X.row(m).transpose();
        dft_.apply(row.data(), numerics::DftDirection::Forward); // adjoint of the +j kernel
        Xout.row(m) = row.transpose();
    }
    return x;
}

CVector MeasurementOperator::apply_measurement(const CVector& x) const
{
    const int M = config_.M;
    const int K = config_.K;
    if (x.size() != domain_dim())
        throw std::invalid_argument("apply_measurement: domain length mismatch");

    CMatrix X = Eigen::Map<const CMatrix>(x.data(), M, K);
    CVector row(K);
    for (int m = 0; m < M; ++m)
    {
        row = X.row(m).transpose();
        dft_.apply(row.data(), numerics::DftDirection::Inverse);
        X.row(m) = row.transpose();
    }

    const int N_r = plan_.n_antennas();
    const int N_p = plan_.n_pilots();
    CVector y(range_dim());
    for (int p = 0; p < N_p; ++p)
    {
        const int k = plan_.pilot_indices[static_cast<std::size_t>(p)];
        y.segment(static_cast<Eigen::Index>(p) * N_r, N_r).noalias() =
            plan_.pilot_symbols(p) * (selected_manifolds_[static_cast<std::size_t>(p)] * X.col(k));
    }
    return y;
}

CVector MeasurementOperator::apply_measurement_adjoint(const CVector& y) const
{
    const int M = config_.M;
    const int K = config_.K;
    if (y.size() != range_dim())
        throw std::invalid_argument("apply_measurement_adjoint: range length mismatch");

    const int N_r = plan_.n_antennas();
    CMatrix X = CMatrix::Zero(M, K);
    for (int p = 0; p < plan_.n_pilots(); ++p)
    {
        const int k = plan_.pilot_indices[static_cast<std::size_t>(p)];
        X.col(k).noalias() = selected_manifolds_[static_cast<std::size_t>(p)].adjoint() *
                             (std::conj(plan_.pilot_symbols(p)) *
                              y.segment(static_cast<Eigen::Index>(p) * N_r, N_r));
    }

    CVector x(domain_dim());
    Eigen::Map<CMatrix> Xout(x.data(), M, K);
    CVector row(K);
    for (int m = 0; m < M; ++m)
    {
        row = X.row(m).transpose();
        dft_.apply(row.data(), numerics::DftDirection::Forward);
        Xout.row(m) = row.transpose();
    }
    return x;
}

CVector MeasurementOperator::column_uncached(int index) const
{
    const int M = config_.M;
    const int K = config_.K;
    const int q = index % M; // wavenumber grid position
    const int t = index / M; // delay tap

    const int N_r = plan_.n_antennas();
    CVector col(range_dim());
    const double tap_scale = 1.0 / std::sqrt(static_cast<double>(K));
    for (int p = 0; p < plan_.n_pilots(); ++p)
    {
        const int k = plan_.pilot_indices[static_cast<std::size_t>(p)];
        const cplx f =
            tap_scale * std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(t) * k / K);
        col.segment(static_cast<Eigen::Index>(p) * N_r, N_r).noalias() =
            (plan_.pilot_symbols(p) * f) *
            selected_manifolds_[static_cast<std::size_t>(p)].col(q);
    }
    return col;
}

CVector MeasurementOperator::column(int index) const
{
    if (index < 0 || index >= domain_dim())
        throw std::invalid_argument("extract_columns: column index out of range");

    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = cache_.entries.find(index);
    if (it != cache_.entries.end())
    {
        cache_.order.splice(cache_.order.begin(), cache_.order, it->second.second);
        return it->second.first;
    }
    CVector col = column_uncached(index);
    cache_.order.push_front(index);
    cache_.entries.emplace(index, std::make_pair(col, cache_.order.begin()));
    if (cache_.entries.size() > cache_.capacity)
    {
        cache_.entries.erase(cache_.order.back());
        cache_.order.pop_back();
    }
    return col;
}

CMatrix MeasurementOperator::extract_columns(const std::vector<int>& T) const
{
    CMatrix cols(range_dim(), static_cast<Eigen::Index>(T.size()));
    for (std::size_t j = 0; j < T.size(); ++j)
        cols.col(static_cast<Eigen::Index>(j)) = column(T[j]);
    return cols;
}

std::pair<double, double> MeasurementOperator::frame_bounds_estimate(int iters) const
{
    // Power iteration on D D^H from a deterministic start; the lower bound
    // comes from a second run on the spectrally shifted upper*I - D D^H.
    CVector v = CVector::Ones(domain_dim());
    v /= v.norm();
    double upper = 0.0;
    for (int it = 0; it < iters; ++it)
    {
        CVector w = apply_dictionary(apply_dictionary_adjoint(v));
        upper = w.norm();
        if (upper == 0.0)
            return {0.0, 0.0};
        v = w / upper;
    }

    CVector u = CVector::Ones(domain_dim());
    // Perturb deterministically so the start is not orthogonal to extreme eigenvectors.
    for (Eigen::Index i = 0; i < u.size(); ++i)
        u(i) += cplx(0.0, static_cast<double>(i % 7) / 7.0);
    u /= u.norm();
    double shifted = 0.0;
    for (int it = 0; it < iters; ++it)
    {
        CVector w = upper * u - apply_dictionary(apply_dictionary_adjoint(u));
        shifted = w.norm();
        if (shifted == 0.0)
            break;
        u = w / shifted;
    }
    return {upper - shifted, upper};
}

Observation observe(const SpaceFrequencyGrid& sfg, const SamplingPlan& plan, double sigma_w,
                    std::uint64_t rng_seed)
{
    plan.validate(sfg.config);
    if (!(sigma_w >= 0.0))
        throw std::invalid_argument("observe: noise level must be nonnegative");

    Rng rng(rng_seed);
    const int N_r = plan.n_antennas();
    const int N_p = plan.n_pilots();
    Observation obs;
    obs.noise_sigma = sigma_w;
    obs.plan = plan;
    obs.y0.resize(static_cast<Eigen::Index>(N_r) * N_p);
    for (int p = 0; p < N_p; ++p)
    {
        const int k = plan.pilot_indices[static_cast<std::size_t>(p)];
        for (int r = 0; r < N_r; ++r)
        {
            const int m = plan.antenna_indices[static_cast<std::size_t>(r)];
            obs.y0(static_cast<Eigen::Index>(p) * N_r + r) =
                plan.pilot_symbols(p) * sfg.entries(m, k) + sigma_w * rng.complex_normal();
        }
    }
    return obs;
}

double sigma_for_snr_db(const SpaceFrequencyGrid& sfg, const SamplingPlan& plan, double snr_db)
{
    plan.validate(sfg.config);
    double mean_power = 0.0;
    for (int p = 0; p < plan.n_pilots(); ++p)
    {
        const int k = plan.pilot_indices[static_cast<std::size_t>(p)];
        for (int m : plan.antenna_indices)
            mean_power += std::norm(plan.pilot_symbols(p) * sfg.entries(m, k));
    }
    mean_power /= static_cast<double>(plan.n_antennas()) * plan.n_pilots();
    return std::sqrt(mean_power / std::pow(10.0, snr_db / 10.0));
}

} // namespace faslab::op
