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

#include "faslab/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "faslab/numerics.hpp"
#include "faslab/rng.hpp"

namespace faslab::recovery
{

namespace
{

/*!
 * Shared pursuit loop. select(scores, taken) returns the indices to add this
 * iteration (all fresh, i.e. taken[i] == false); an empty return ends the
 * pursuit early. scores holds the normalized correlation magnitudes of the
 * current residual against every column.
 */
RecoverySolution pursue(const op::MeasurementOperator& op, const CVector& y0, double eps1,
                        int n_iter,
                        const std::function<std::vector<int>(const RVector&, const std::vector<char>&)>& select)
{
    if (y0.size() != op.range_dim())
        throw std::invalid_argument("pursue: observation length does not match the operator range");
    if (eps1 < 0.0)
        throw std::invalid_argument("pursue: negative residual threshold");
    if (n_iter < 0)
        throw std::invalid_argument("pursue: negative iteration budget");

    const int n = static_cast<int>(op.domain_dim());
    const double inv_norm = 1.0 / op.column_norm();

    RecoverySolution out;
    RecoveryState& state = out.state;
    state.residual = y0;
    state.residual_history.push_back(state.residual.norm());

    std::vector<char> taken(static_cast<std::size_t>(n), 0);
    CMatrix selected_columns; // grown in place across iterations
    CVector coeffs;

    while (state.residual_history.back() > eps1 && state.iterations < n_iter)
    {
        const CVector q = op.apply_measurement_adjoint(state.residual);
        const RVector scores = q.cwiseAbs() * inv_norm;

        const std::vector<int> fresh = select(scores, taken);
        if (fresh.empty())
            break;
        if (static_cast<Eigen::Index>(state.support.size() + fresh.size()) > op.range_dim())
        {
            state.support_saturated = true;
            break;
        }

        const Eigen::Index old_cols = selected_columns.cols();
        selected_columns.conservativeResize(op.range_dim(),
                                            old_cols + static_cast<Eigen::Index>(fresh.size()));
        for (std::size_t j = 0; j < fresh.size(); ++j)
        {
            state.support.push_back(fresh[j]);
            taken[static_cast<std::size_t>(fresh[j])] = 1;
            selected_columns.col(old_cols + static_cast<Eigen::Index>(j)) =
                op.extract_columns({fresh[j]});
        }

        const numerics::LeastSquaresResult ls = numerics::least_squares(selected_columns, y0);
        coeffs = ls.coefficients;
        state.residual = y0 - selected_columns * coeffs;
        state.residual_history.push_back(state.residual.norm());
        ++state.iterations;
    }

    out.x_hat = CVector::Zero(n);
    for (std::size_t j = 0; j < state.support.size(); ++j)
        out.x_hat(state.support[j]) = (coeffs.size() > 0) ? coeffs(static_cast<Eigen::Index>(j))
                                                          : cplx{0.0, 0.0};
    out.g_hat = op.apply_dictionary(out.x_hat);
    return out;
}

//! Indices of the gamma largest scores not yet taken; ties go to the lower index.
std::vector<int> top_scores(const RVector& scores, const std::vector<char>& taken, int gamma)
{
    std::vector<int> order;
    order.reserve(static_cast<std::size_t>(scores.size()));
    for (int i = 0; i < static_cast<int>(scores.size()); ++i)
        if (!taken[static_cast<std::size_t>(i)])
            order.push_back(i);
    const auto take = std::min<std::size_t>(static_cast<std::size_t>(gamma), order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                      [&scores](int a, int b) {
                          if (scores(a) != scores(b))
                              return scores(a) > scores(b);
                          return a < b;
                      });
    order.resize(take);
    return order;
}

} // namespace

GroupPartition GroupPartition::rectangles(int M, int K, int block_wavenumber, int block_delay)
{
    if (M < 1 || K < 1)
        throw std::invalid_argument("GroupPartition: empty grid");
    if (block_wavenumber < 1 || block_delay < 1)
        throw std::invalid_argument("GroupPartition: block sizes must be positive");

    GroupPartition out;
    // Delay-major block order so that 1x1 blocks reproduce the plain index
    // order (column-major vectorization is index = tap * M + wavenumber).
    for (int t0 = 0; t0 < K; t0 += block_delay)
        for (int q0 = 0; q0 < M; q0 += block_wavenumber)
        {
            std::vector<int> group;
            for (int t = t0; t < std::min(K, t0 + block_delay); ++t)
                for (int q = q0; q < std::min(M, q0 + block_wavenumber); ++q)
                    group.push_back(t * M + q);
            out.groups.push_back(std::move(group));
        }
    return out;
}

GroupPartition GroupPartition::for_gamma(int M, int K, int gamma, double ratio_hint)
{
    if (gamma < 1)
        throw std::invalid_argument("GroupPartition: gamma must be positive");
    if (!(ratio_hint > 0.0))
        throw std::invalid_argument("GroupPartition: ratio hint must be positive");

    int best_w = 1;
    double best_gap = std::numeric_limits<double>::infinity();
    for (int w = 1; w <= gamma; ++w)
    {
        if (gamma % w != 0)
            continue;
        const int d = gamma / w;
        const double gap = std::abs(std::log(static_cast<double>(w) / d) - std::log(ratio_hint));
        if (gap < best_gap)
        {
            best_gap = gap;
            best_w = w;
        }
    }
    return rectangles(M, K, best_w, gamma / best_w);
}

RecoverySolution dc_gomp(const op::MeasurementOperator& op, const CVector& y0, int gamma,
                         double eps1, int n_iter)
{
    if (gamma < 1)
        throw std::invalid_argument("dc_gomp: gamma must be positive");
    return pursue(op, y0, eps1, n_iter,
                  [gamma](const RVector& scores, const std::vector<char>& taken) {
                      return top_scores(scores, taken, gamma);
                  });
}

RecoverySolution omp(const op::MeasurementOperator& op, const CVector& y0, double eps1, int n_iter)
{
    return dc_gomp(op, y0, 1, eps1, n_iter);
}

RecoverySolution gomp_uniform(const op::MeasurementOperator& op, const CVector& y0, double eps1,
                              int n_iter, const GroupPartition& partition)
{
    if (partition.groups.empty())
        throw std::invalid_argument("gomp_uniform: empty partition");
    std::vector<char> group_taken(partition.groups.size(), 0);
    auto select = [&partition, &group_taken](const RVector& scores,
                                             const std::vector<char>&) -> std::vector<int> {
        int best = -1;
        double best_energy = -1.0;
        for (std::size_t j = 0; j < partition.groups.size(); ++j)
        {
            if (group_taken[j])
                continue;
            double energy = 0.0;
            for (int i : partition.groups[j])
                energy += scores(i) * scores(i);
            if (energy > best_energy)
            {
                best_energy = energy;
                best = static_cast<int>(j);
            }
        }
        if (best < 0)
            return {};
        group_taken[static_cast<std::size_t>(best)] = 1;
        return partition.groups[static_cast<std::size_t>(best)];
    };
    return pursue(op, y0, eps1, n_iter, select);
}

RecoverySolution ls_baseline(const op::MeasurementOperator& op, const CVector& y0)
{
    if (y0.size() != op.range_dim())
        throw std::invalid_argument("ls_baseline: observation length does not match the operator");

    const op::SamplingPlan& plan = op.plan();
    const int n_r = plan.n_antennas();
    const int n_p = plan.n_pilots();

    // Solve (M M^H) w = y0 one pilot block at a time, then map back through
    // the adjoint: x = M^H w is the minimum-norm least-squares solution.
    CVector w(y0.size());
    for (int p = 0; p < n_p; ++p)
    {
        const CMatrix& rows = op.selected_manifold(p);
        const double weight = std::norm(plan.pilot_symbols(p));
        const CMatrix block = weight * (rows * rows.adjoint());
        const CVector segment = y0.segment(static_cast<Eigen::Index>(p) * n_r, n_r);
        w.segment(static_cast<Eigen::Index>(p) * n_r, n_r) =
            numerics::least_squares(block, segment).coefficients;
    }

    RecoverySolution out;
    out.x_hat = op.apply_measurement_adjoint(w);
    out.g_hat = op.apply_dictionary(out.x_hat);
    out.state.residual = y0 - op.apply_measurement(out.x_hat);
    out.state.iterations = 1;
    out.state.residual_history = {y0.norm(), out.state.residual.norm()};
    return out;
}

double relative_error(const CVector& g_hat, const CVector& g)
{
    const double n_hat = g_hat.norm();
    const double n_ref = g.norm();
    if (n_hat == 0.0 || n_ref == 0.0)
        throw std::invalid_argument("relative_error: zero-norm input");
    if (g_hat.size() != g.size())
        throw std::invalid_argument("relative_error: size mismatch");
    return (g_hat / n_hat - g / n_ref).norm();
}

double relative_error(const CMatrix& g_hat, const CMatrix& g)
{
    return relative_error(CVector{g_hat.reshaped()}, CVector{g.reshaped()});
}

CoherenceReport coherence_from_columns(const CMatrix& columns, int gamma, int L,
                                       const std::vector<std::vector<int>>& groups)
{
    if (gamma < 1 || L < 1)
        throw std::invalid_argument("coherence: gamma and L must be positive");
    const int n = static_cast<int>(columns.cols());
    if (n < 2)
        throw std::invalid_argument("coherence: need at least two columns");

    for (const auto& group : groups)
        for (int i : group)
            if (i < 0 || i >= n)
                throw std::invalid_argument("coherence: group index out of range");

    CMatrix unit = columns;
    for (int i = 0; i < n; ++i)
    {
        const double nrm = unit.col(i).norm();
        if (nrm == 0.0)
            throw std::invalid_argument("coherence: zero column");
        unit.col(i) /= nrm;
    }
    const CMatrix gram = unit.adjoint() * unit;

    CoherenceReport report;
    report.columns_analyzed = n;
    report.partition = groups;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j)
                report.mu = std::max(report.mu, std::abs(gram(i, j)));

    for (std::size_t a = 0; a < groups.size(); ++a)
    {
        for (int i : groups[a])
            for (int j : groups[a])
                if (i != j)
                    report.nu = std::max(report.nu, std::abs(gram(i, j)));
        for (std::size_t b = a + 1; b < groups.size(); ++b)
        {
            CMatrix cross(groups[a].size(), groups[b].size());
            for (std::size_t i = 0; i < groups[a].size(); ++i)
                for (std::size_t j = 0; j < groups[b].size(); ++j)
                    cross(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                        gram(groups[a][i], groups[b][j]);
            report.mu_group = std::max(report.mu_group, numerics::spectral_norm(cross) / gamma);
        }
    }

    const double lhs = static_cast<double>(gamma) * L;
    const double inf = std::numeric_limits<double>::infinity();
    const double inv_mu = report.mu > 0.0 ? 1.0 / report.mu : inf;
    const double inv_mu_group = report.mu_group > 0.0 ? 1.0 / report.mu_group : inf;
    report.omp_condition_ok = lhs < 0.5 * (inv_mu + 1.0);
    report.group_condition_ok =
        lhs < 0.5 * (inv_mu_group + gamma - (gamma - 1.0) * report.nu * inv_mu_group);
    return report;
}

CoherenceReport coherence_report(const op::MeasurementOperator& op, int gamma, int L,
                                 const GroupPartition* partition, int column_cap,
                                 std::uint64_t subset_seed)
{
    if (column_cap < 2)
        throw std::invalid_argument("coherence_report: column cap too small");
    const int n = static_cast<int>(op.domain_dim());

    std::vector<int> picked;
    bool subset = false;
    if (n <= column_cap)
    {
        picked.resize(static_cast<std::size_t>(n));
        std::iota(picked.begin(), picked.end(), 0);
    }
    else
    {
        Rng rng(derive_seed(subset_seed, {0xc0u}));
        picked = rng.sample_distinct(n, column_cap);
        subset = true;
    }

    std::vector<std::vector<int>> groups;
    if (partition != nullptr && !subset)
    {
        groups = partition->groups;
    }
    else
    {
        // Chunk the analyzed columns (by position) into consecutive groups of
        // size gamma; a sampled subset has no meaningful rectangle structure.
        for (std::size_t start = 0; start < picked.size(); start += static_cast<std::size_t>(gamma))
        {
            std::vector<int> g;
            for (std::size_t i = start;
                 i < std::min(picked.size(), start + static_cast<std::size_t>(gamma)); ++i)
                g.push_back(static_cast<int>(i));
            groups.push_back(std::move(g));
        }
    }

    const CMatrix columns = op.extract_columns(picked);
    CoherenceReport report = coherence_from_columns(columns, gamma, L, groups);
    report.subset_used = subset;
    return report;
}

ErrorBoundConstants error_bound_constants(const ErrorBoundParams& params)
{
    if (!(params.delta_kP >= 0.0 && params.delta_kP < 1.0) ||
        !(params.delta_P >= 0.0 && params.delta_P < 1.0))
        throw std::invalid_argument("error_bound_constants: isometry constants must lie in [0,1)");
    if (params.k < 1 || params.P <= params.k)
        throw std::invalid_argument("error_bound_constants: need P > k >= 1");
    if (!(params.c > 0.0))
        throw std::invalid_argument("error_bound_constants: split parameter must be positive");

    ErrorBoundConstants out;
    out.rho = static_cast<double>(params.k) / params.P;
    out.a = std::sqrt(1.0 + 1.0 / params.c);
    const double b_sq = 1.0 / out.rho - 1.0 - params.c;
    if (!(b_sq > 0.0))
        throw std::invalid_argument("error_bound_constants: split exceeds 1/rho - 1");
    out.b = std::sqrt(b_sq);

    const double low = std::sqrt(1.0 - params.delta_kP);
    const double high = std::sqrt(1.0 + params.delta_P);
    const double denom = out.b * low - high;
    if (!(denom > 0.0))
        throw std::invalid_argument("error_bound_constants: bound denominator not positive");
    out.C0 = 2.0 * (out.a * low + high) / denom;
    // The second constant shares the structure with a sqrt(rho) deflation; its
    // own positivity region is smaller, so the raw value is reported as-is.
    out.C1 = 2.0 / (out.b * std::sqrt(out.rho) * low - high);
    return out;
}

double minimize_c0_split(double delta_kP, double delta_P, double rho, double tol)
{
    if (!(rho > 0.0 && rho < 1.0))
        throw std::invalid_argument("minimize_c0_split: rho must lie in (0,1)");
    if (!(delta_kP >= 0.0 && delta_kP < 1.0) || !(delta_P >= 0.0 && delta_P < 1.0))
        throw std::invalid_argument("minimize_c0_split: isometry constants must lie in [0,1)");

    // Feasibility needs b(c) sqrt(1-delta_kP) > sqrt(1+delta_P); b decreases in
    // c, so the window is (0, c_max).
    const double ratio = (1.0 + delta_P) / (1.0 - delta_kP);
    const double c_max = 1.0 / rho - 1.0 - ratio;
    if (!(c_max > 0.0))
        throw std::invalid_argument("minimize_c0_split: no feasible split parameter");

    const auto value = [&](double c) {
        const double a = std::sqrt(1.0 + 1.0 / c);
        const double b = std::sqrt(1.0 / rho - 1.0 - c);
        const double low = std::sqrt(1.0 - delta_kP);
        const double high = std::sqrt(1.0 + delta_P);
        return 2.0 * (a * low + high) / (b * low - high);
    };

    // Golden-section search; C0 diverges at both window ends, so the minimum
    // is interior.
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = c_max * 1e-12;
    double hi = c_max * (1.0 - 1e-12);
    double x1 = hi - gr * (hi - lo);
    double x2 = lo + gr * (hi - lo);
    double f1 = value(x1);
    double f2 = value(x2);
    while (hi - lo > tol * c_max)
    {
        if (f1 < f2)
        {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = value(x1);
        }
        else
        {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = value(x2);
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace faslab::recovery
