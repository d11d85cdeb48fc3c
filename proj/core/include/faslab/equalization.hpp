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

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "faslab/types.hpp"

namespace faslab::eq
{

/*!
 * Port selection for maximum-ratio combining: pick N_r of the M candidate
 * rows of a nonnegative weight matrix (per-row, per-subcarrier combined-gain
 * contributions |G(m,k)|^2) so that the worst subcarrier's summed gain is
 * maximized. The exact solver and the heuristics below all consume this form.
 */
struct EqualizationProblem
{
    RMatrix weights; // M x K, entrywise nonnegative
    int n_select = 1;

    void validate() const;

    //! Squared-magnitude weights of a space-frequency grid.
    static EqualizationProblem from_grid(const CMatrix& grid, int n_select);
};

enum class Certificate
{
    optimal,          // exhaustive or fully pruned search finished
    heuristic,        // greedy construction, no optimality claim
    budget_exhausted, // search stopped on the node/time budget; best-so-far
};

std::string to_string(Certificate certificate);

struct EqualizationSolution
{
    std::vector<int> selected; // ascending row indices, size n_select
    double objective = 0.0;    // min over subcarriers of the summed weights
    Certificate certificate = Certificate::heuristic;
    long long nodes_explored = 0;
    double wall_time_s = 0.0;
    bool separation_fallback = false; // greedy seeding had to waive the spacing rule
};

/*!
 * Canonical objective evaluation: sum the selected rows in ascending index
 * order per subcarrier, return the minimum. Every solver reports objectives
 * recomputed through this routine so results compare bit-for-bit.
 */
double min_column_sum(const RMatrix& weights, const std::vector<int>& selected);

struct BranchBudget
{
    long long max_nodes = 50'000'000;
    double max_seconds = std::numeric_limits<double>::infinity();
};

/*!
 * Exact max-min selection by depth-first branch and bound. Rows are expanded
 * in order of decreasing total weight (ties to the lower index), the
 * include-branch first. The upper bound at a node adds, per subcarrier, the
 * largest possible completion sum from a precomputed suffix table of top-r
 * partial sums, and takes the minimum across subcarriers; nodes whose bound
 * falls strictly below the incumbent are pruned. The incumbent starts from
 * the greedy heuristic below, so the search only refines. Equal-objective
 * ties resolve to the lexicographically smallest ascending index set, i.e.
 * the same selection a lexicographic exhaustive search returns. Certificate
 * optimal when the tree was exhausted, budget_exhausted otherwise.
 */
EqualizationSolution branch_and_bound(const EqualizationProblem& problem,
                                      const BranchBudget& budget = {});

/*!
 * Greedy two-phase heuristic. Phase one seeds n_init rows by largest mean
 * weight subject to a minimum index separation delta_n from all previous
 * seeds (the first seed is unconstrained; if no row satisfies the spacing the
 * constraint is waived for that pick and the solution is flagged). Phase two
 * grows the set one row at a time, maximizing the worst-subcarrier cumulative
 * gain. Defaults: n_init = max(1, n_select/4), delta_n = M/(2 n_select)
 * (integer division), selected when the arguments are negative.
 */
EqualizationSolution grsip(const EqualizationProblem& problem, int n_init = -1, int delta_n = -1);

/*!
 * Best of `draws` uniformly random distinct selections (deterministic per
 * seed). When draws meets or exceeds the number of possible selections the
 * search enumerates instead and certifies optimality.
 */
EqualizationSolution random_baseline(const EqualizationProblem& problem, long long draws,
                                     std::uint64_t seed);

/*!
 * Deterministic evenly spread rows over {0..M-1}: index round(i*(M-1)/(N_r-1)),
 * deduplicated (so fewer rows can come back when N_r is close to M); N_r = 1
 * picks row 0.
 */
std::vector<int> equal_spaced(int M, int n_select);

//! Per-subcarrier combined gains sum_{m in selected} |G(m,k)|^2 of a grid.
RVector combined_gains(const CMatrix& grid, const std::vector<int>& selected);

} // namespace faslab::eq
