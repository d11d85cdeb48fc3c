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

#include "faslab/equalization.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>

#include "faslab/rng.hpp"

namespace faslab::eq
{

namespace
{

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

//! Number of n_select-subsets of M rows, saturating well above any draw budget.
double subset_count(int M, int n_select)
{
    double count = 1.0;
    for (int i = 0; i < n_select; ++i)
    {
        count *= static_cast<double>(M - i) / (i + 1);
        if (count > 1e18)
            return 1e18;
    }
    return std::round(count);
}

} // namespace

void EqualizationProblem::validate() const
{
    const int M = static_cast<int>(weights.rows());
    if (M < 1 || weights.cols() < 1)
        throw std::invalid_argument("EqualizationProblem: empty weight matrix");
    if (n_select < 1 || n_select > M)
        throw std::invalid_argument("EqualizationProblem: n_select outside [1, M]");
    if ((weights.array() < 0.0).any())
        throw std::invalid_argument("EqualizationProblem: negative weight");
}

EqualizationProblem EqualizationProblem::from_grid(const CMatrix& grid, int n_select)
{
    EqualizationProblem problem;
    problem.weights = grid.cwiseAbs2();
    problem.n_select = n_select;
    problem.validate();
    return problem;
}

std::string to_string(Certificate certificate)
{
    switch (certificate)
    {
    case Certificate::optimal: return "optimal";
    case Certificate::heuristic: return "heuristic";
    case Certificate::budget_exhausted: return "budget_exhausted";
    }
    return "unknown";
}

double min_column_sum(const RMatrix& weights, const std::vector<int>& selected)
{
    if (selected.empty())
        throw std::invalid_argument("min_column_sum: empty selection");
    std::vector<int> rows = selected;
    std::sort(rows.begin(), rows.end());
    if (std::adjacent_find(rows.begin(), rows.end()) != rows.end())
        throw std::invalid_argument("min_column_sum: duplicate row index");
    if (rows.front() < 0 || rows.back() >= weights.rows())
        throw std::invalid_argument("min_column_sum: row index out of range");

    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < weights.cols(); ++k)
    {
        double sum = 0.0;
        for (int m : rows)
            sum += weights(m, k);
        best = std::min(best, sum);
    }
    return best;
}

EqualizationSolution grsip(const EqualizationProblem& problem, int n_init, int delta_n)
{
    problem.validate();
    const auto start = Clock::now();
    const int M = static_cast<int>(problem.weights.rows());
    const Eigen::Index K = problem.weights.cols();
    const int R = problem.n_select;

    if (n_init < 0)
        n_init = std::max(1, R / 4);
    if (delta_n < 0)
        delta_n = M / (2 * R);
    if (n_init > R)
        throw std::invalid_argument("grsip: more seeds than selections");

    EqualizationSolution out;
    std::vector<char> chosen(static_cast<std::size_t>(M), 0);
    const RVector row_mean = problem.weights.rowwise().mean();

    // Phase one: spread-out seeds ranked by mean gain across subcarriers.
    for (int step = 0; step < n_init; ++step)
    {
        int best = -1;
        double best_mean = -1.0;
        for (int i = 0; i < M; ++i)
        {
            if (chosen[static_cast<std::size_t>(i)])
                continue;
            bool spaced = true;
            for (int c : out.selected)
                if (std::abs(i - c) < delta_n)
                {
                    spaced = false;
                    break;
                }
            if (spaced && row_mean(i) > best_mean)
            {
                best_mean = row_mean(i);
                best = i;
            }
        }
        if (best < 0)
        {
            // Every free row violates the spacing rule; waive it for this pick.
            out.separation_fallback = true;
            for (int i = 0; i < M; ++i)
                if (!chosen[static_cast<std::size_t>(i)] && row_mean(i) > best_mean)
                {
                    best_mean = row_mean(i);
                    best = i;
                }
        }
        out.selected.push_back(best);
        chosen[static_cast<std::size_t>(best)] = 1;
    }

    // Phase two: grow by the row that lifts the worst subcarrier the most.
    RVector cumulative = RVector::Zero(K);
    for (int c : out.selected)
        cumulative += problem.weights.row(c).transpose();
    while (static_cast<int>(out.selected.size()) < R)
    {
        int best = -1;
        double best_min = -1.0;
        for (int i = 0; i < M; ++i)
        {
            if (chosen[static_cast<std::size_t>(i)])
                continue;
            const double candidate_min =
                (cumulative + problem.weights.row(i).transpose()).minCoeff();
            if (candidate_min > best_min)
            {
                best_min = candidate_min;
                best = i;
            }
        }
        out.selected.push_back(best);
        chosen[static_cast<std::size_t>(best)] = 1;
        cumulative += problem.weights.row(best).transpose();
    }

    std::sort(out.selected.begin(), out.selected.end());
    out.objective = min_column_sum(problem.weights, out.selected);
    out.certificate = Certificate::heuristic;
    out.wall_time_s = seconds_since(start);
    return out;
}

EqualizationSolution branch_and_bound(const EqualizationProblem& problem,
                                      const BranchBudget& budget)
{
    problem.validate();
    const auto start = Clock::now();
    const int M = static_cast<int>(problem.weights.rows());
    const int K = static_cast<int>(problem.weights.cols());
    const int R = problem.n_select;

    // Static branch order: decreasing total row weight, ties to the lower
    // index. Strong rows first makes the include-first DFS reach good
    // incumbents early and the suffix bound tight.
    std::vector<int> order(static_cast<std::size_t>(M));
    std::iota(order.begin(), order.end(), 0);
    const RVector totals = problem.weights.rowwise().sum();
    std::stable_sort(order.begin(), order.end(),
                     [&totals](int a, int b) { return totals(a) > totals(b); });

    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    RowMajor w_ord(M, K);
    for (int d = 0; d < M; ++d)
        w_ord.row(d) = problem.weights.row(order[static_cast<std::size_t>(d)]);

    // Suffix table: top[d][r][k] is the largest sum of r column-k weights
    // available among ordered rows d..M-1, computed per column independently.
    // min_k(in_sum[k] + top[d][need][k]) then upper-bounds every completion of
    // the current node in one pass over the columns.
    const auto top_at = [K, R](int d, int r) { return (static_cast<std::size_t>(d) * (R + 1) + r) * K; };
    std::vector<double> top(static_cast<std::size_t>(M + 1) * (R + 1) * K,
                            -std::numeric_limits<double>::infinity());
    for (int k = 0; k < K; ++k)
        top[top_at(M, 0) + static_cast<std::size_t>(k)] = 0.0;
    for (int d = M - 1; d >= 0; --d)
        for (int r = 0; r <= R; ++r)
        {
            double* dst = top.data() + top_at(d, r);
            const double* skip = top.data() + top_at(d + 1, r);
            const double* take = (r > 0) ? top.data() + top_at(d + 1, r - 1) : nullptr;
            for (int k = 0; k < K; ++k)
            {
                double v = skip[k];
                if (take != nullptr)
                    v = std::max(v, w_ord(d, k) + take[k]);
                dst[k] = v;
            }
        }

    // Seed the incumbent with the greedy heuristic; the search only refines.
    const EqualizationSolution seed = grsip(problem);
    std::vector<int> best_selected = seed.selected;
    double best_objective = seed.objective;

    EqualizationSolution out;
    out.separation_fallback = seed.separation_fallback;
    long long nodes = 0;
    bool exhausted = false;
    std::vector<int> stack;
    stack.reserve(static_cast<std::size_t>(R));
    // One saved partial-sum row per depth avoids add/subtract round-off drift.
    RowMajor partial(R + 1, K);
    partial.row(0).setZero();

    const std::function<void(int, int)> dfs = [&](int d, int in) {
        ++nodes;
        if (nodes >= budget.max_nodes ||
            ((nodes & 1023) == 0 && seconds_since(start) > budget.max_seconds))
        {
            exhausted = true;
            return;
        }
        if (in == R)
        {
            // Quick screen with the branch-order sums; confirm candidates with
            // the canonical ascending-index evaluation so summation order
            // cannot corrupt the certified objective. Equal-objective ties
            // resolve to the lexicographically smallest index set, making the
            // result coincide with a lexicographic exhaustive search.
            const double quick = partial.row(in).minCoeff();
            if (quick > best_objective - 1e-9 * (1.0 + std::abs(best_objective)))
            {
                std::vector<int> candidate = stack;
                std::sort(candidate.begin(), candidate.end());
                const double canonical = min_column_sum(problem.weights, candidate);
                if (canonical > best_objective ||
                    (canonical == best_objective &&
                     std::lexicographical_compare(candidate.begin(), candidate.end(),
                                                  best_selected.begin(), best_selected.end())))
                {
                    best_objective = canonical;
                    best_selected = std::move(candidate);
                }
            }
            return;
        }
        if (M - d < R - in)
            return;

        // Prune only when the bound is strictly below the incumbent: subtrees
        // that can still tie must be explored for the tie-break to hold.
        const int need = R - in;
        const double* completion = top.data() + top_at(d, need);
        double bound = std::numeric_limits<double>::infinity();
        for (int k = 0; k < K; ++k)
        {
            const double v = partial(in, k) + completion[k];
            if (v < bound)
            {
                bound = v;
                if (bound < best_objective)
                    break;
            }
        }
        if (bound < best_objective)
            return;

        stack.push_back(order[static_cast<std::size_t>(d)]);
        partial.row(in + 1) = partial.row(in) + w_ord.row(d);
        dfs(d + 1, in + 1);
        stack.pop_back();
        if (exhausted)
            return;
        dfs(d + 1, in);
    };
    dfs(0, 0);

    out.selected = std::move(best_selected);
    std::sort(out.selected.begin(), out.selected.end());
    out.objective = min_column_sum(problem.weights, out.selected);
    out.certificate = exhausted ? Certificate::budget_exhausted : Certificate::optimal;
    out.nodes_explored = nodes;
    out.wall_time_s = seconds_since(start);
    return out;
}

EqualizationSolution random_baseline(const EqualizationProblem& problem, long long draws,
                                     std::uint64_t seed)
{
    problem.validate();
    if (draws < 1)
        throw std::invalid_argument("random_baseline: need at least one draw");
    const auto start = Clock::now();
    const int M = static_cast<int>(problem.weights.rows());
    const int R = problem.n_select;
    const double total = subset_count(M, R);

    EqualizationSolution out;
    out.objective = -std::numeric_limits<double>::infinity();
    long long evaluated = 0;

    const auto consider = [&](const std::vector<int>& candidate) {
        ++evaluated;
        const double value = min_column_sum(problem.weights, candidate);
        if (value > out.objective)
        {
            out.objective = value;
            out.selected = candidate;
        }
    };

    if (static_cast<double>(draws) >= total)
    {
        // The budget covers the whole space: enumerate lexicographically.
        std::vector<int> candidate(static_cast<std::size_t>(R));
        std::iota(candidate.begin(), candidate.end(), 0);
        while (true)
        {
            consider(candidate);
            int i = R - 1;
            while (i >= 0 && candidate[static_cast<std::size_t>(i)] == M - R + i)
                --i;
            if (i < 0)
                break;
            ++candidate[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < R; ++j)
                candidate[static_cast<std::size_t>(j)] = candidate[static_cast<std::size_t>(j - 1)] + 1;
        }
        out.certificate = Certificate::optimal;
    }
    else
    {
        // Distinct random subsets; the attempt cap keeps the rejection loop
        // finite when the draw budget approaches the subset count.
        Rng rng(derive_seed(seed, {0xbad5eedULL, static_cast<std::uint64_t>(R)}));
        std::set<std::vector<int>> seen;
        const long long max_attempts = 64 * draws + 1024;
        for (long long attempt = 0; attempt < max_attempts && evaluated < draws; ++attempt)
        {
            std::vector<int> candidate = rng.sample_distinct(M, R);
            if (seen.insert(candidate).second)
                consider(candidate);
        }
        out.certificate = Certificate::heuristic;
    }

    out.nodes_explored = evaluated;
    out.wall_time_s = seconds_since(start);
    return out;
}

std::vector<int> equal_spaced(int M, int n_select)
{
    if (M < 1 || n_select < 1)
        throw std::invalid_argument("equal_spaced: need positive sizes");
    if (n_select == 1)
        return {0};
    std::vector<int> rows;
    for (int i = 0; i < n_select; ++i)
    {
        const int idx = static_cast<int>(
            std::lround(static_cast<double>(i) * (M - 1) / (n_select - 1)));
        if (rows.empty() || rows.back() != idx)
            rows.push_back(idx);
    }
    return rows;
}

RVector combined_gains(const CMatrix& grid, const std::vector<int>& selected)
{
    if (selected.empty())
        throw std::invalid_argument("combined_gains: empty selection");
    RVector gains = RVector::Zero(grid.cols());
    for (int m : selected)
    {
        if (m < 0 || m >= grid.rows())
            throw std::invalid_argument("combined_gains: row index out of range");
        gains += grid.row(m).cwiseAbs2().transpose();
    }
    return gains;
}

} // namespace faslab::eq
