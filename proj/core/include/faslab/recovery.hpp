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

#include <limits>
#include <optional>

#include "faslab/operators.hpp"

namespace faslab::recovery
{

/*!
 * The evolving pursuit state: support in selection order, final residual,
 * completed iteration count and the residual-norm history (initial norm first,
 * then one entry per iteration; nonincreasing by the orthogonal projection
 * property). support_saturated marks the early stop taken when another
 * selection round would push the support past the range dimension.
 */
struct RecoveryState
{
    std::vector<int> support;
    CVector residual;
    int iterations = 0;
    std::vector<double> residual_history;
    bool support_saturated = false;
};

/*!
 * A reconstruction: the sparse-domain coefficients x_hat (zero off-support),
 * the synthesized grid g_hat = D x_hat, the final state, and the relative
 * error against the ground truth when one was supplied (NaN otherwise).
 */
struct RecoverySolution
{
    CVector g_hat;
    CVector x_hat;
    RecoveryState state;
    double relative_error = std::numeric_limits<double>::quiet_NaN();
};

/*!
 * Partition of the M*K coefficient indices into contiguous 2D rectangles of
 * block_wavenumber x block_delay cells (trailing blocks may be smaller when
 * the block sizes do not divide the grid).
 */
struct GroupPartition
{
    std::vector<std::vector<int>> groups;

    static GroupPartition rectangles(int M, int K, int block_wavenumber, int block_delay);

    /*!
     * Factors gamma into the divisor pair (wavenumber x delay) whose aspect
     * ratio is closest to ratio_hint (gamma_k / gamma_tau of the leakage
     * analysis; 1.0 when unknown), then tiles the grid with it.
     */
    static GroupPartition for_gamma(int M, int K, int gamma, double ratio_hint = 1.0);
};

/*!
 * Descending-correlation group orthogonal matching pursuit: each iteration
 * correlates the residual through the operator adjoint, selects the gamma
 * largest-magnitude correlations not yet in the support (ties to the lower
 * index), re-solves least squares on the grown support and updates the
 * residual; stops when ||r|| <= eps1 or the iteration budget is spent.
 * Correlations are ranked on normalized columns; least squares runs on the
 * raw (unnormalized) columns.
 */
RecoverySolution dc_gomp(const op::MeasurementOperator& op, const CVector& y0, int gamma,
                         double eps1, int n_iter);

//! Classical orthogonal matching pursuit: dc_gomp with gamma = 1.
RecoverySolution omp(const op::MeasurementOperator& op, const CVector& y0, double eps1, int n_iter);

/*!
 * Group OMP over a predefined partition: each iteration selects the whole
 * unselected group maximizing the Euclidean norm of its correlations.
 */
RecoverySolution gomp_uniform(const op::MeasurementOperator& op, const CVector& y0, double eps1,
                              int n_iter, const GroupPartition& partition);

/*!
 * Minimum-norm least squares on the full operator, no sparsity exploited.
 * Uses the normal-equations route through the operator adjoint: M M^H is
 * block-diagonal with one Hermitian N_r x N_r block per pilot (the DFT factor
 * is unitary and sampling rows select distinct entries), each solved by the
 * rank-revealing least-squares kernel; then x = M^H w and g = D x.
 */
RecoverySolution ls_baseline(const op::MeasurementOperator& op, const CVector& y0);

//! || Ghat/||Ghat||_F - G/||G||_F ||_F; rejects zero-norm inputs. Maximum value 2.
double relative_error(const CMatrix& g_hat, const CMatrix& g);
double relative_error(const CVector& g_hat, const CVector& g);

/*!
 * Coherence diagnostics of the measurement columns after unit normalization:
 * plain coherence mu (largest off-diagonal correlation), group coherence
 * mu_group (largest cross-group Gram spectral norm divided by gamma),
 * subcoherence nu (largest within-group correlation), and the resulting
 * sufficient-condition booleans for recovering L groups:
 *
 *   omp:   gamma L < (mu^-1 + 1) / 2
 *   group: gamma L < (mu_group^-1 + gamma - (gamma-1) nu mu_group^-1) / 2
 *
 * At full scale the analysis is capped to a random column subset (flagged via
 * subset_used; groups then chunk the sampled columns in order).
 */
struct CoherenceReport
{
    double mu = 0.0;
    double mu_group = 0.0;
    double nu = 0.0;
    std::vector<std::vector<int>> partition;
    bool omp_condition_ok = false;
    bool group_condition_ok = false;
    bool subset_used = false;
    int columns_analyzed = 0;
};

CoherenceReport coherence_report(const op::MeasurementOperator& op, int gamma, int L,
                                 const GroupPartition* partition = nullptr, int column_cap = 2048,
                                 std::uint64_t subset_seed = 0x5eedfa51);

//! Same analysis on explicitly supplied (unnormalized) columns.
CoherenceReport coherence_from_columns(const CMatrix& columns, int gamma, int L,
                                       const std::vector<std::vector<int>>& groups);

/*!
 * Inputs of the reconstruction error bound: restricted-isometry constants for
 * group sparsity k and subset size P (rho = k/P), and the free split parameter
 * c > 0 entering a = sqrt(1 + 1/c) and b = sqrt(1/rho - 1 - c).
 */
struct ErrorBoundParams
{
    double delta_kP = 0.0; // isometry constant at sparsity k + P
    double delta_P = 0.0;  // isometry constant at sparsity P
    int k = 1;
    int P = 4;
    double c = 1.0;
};

struct ErrorBoundConstants
{
    double a = 0.0;
    double b = 0.0;
    double rho = 0.0;
    double C0 = 0.0;
    double C1 = 0.0;
};

/*!
 * Evaluates the bound constants
 *
 *   C0 = 2 (a sqrt(1-delta_kP) + sqrt(1+delta_P)) / (b sqrt(1-delta_kP) - sqrt(1+delta_P)),
 *   C1 = 2 / (b sqrt(rho) sqrt(1-delta_kP) - sqrt(1+delta_P)).
 *
 * Throws on infeasible parameters (b^2 <= 0 or the C0 denominator <= 0). C1 is
 * returned as computed by its formula; it is only meaningful where its own
 * denominator is positive, which is a strictly smaller region.
 */
ErrorBoundConstants error_bound_constants(const ErrorBoundParams& params);

/*!
 * The split parameter minimizing C0 at fixed isometry constants, found by
 * golden-section search over the feasible interval.
 */
double minimize_c0_split(double delta_kP, double delta_P, double rho, double tol = 1e-9);

} // namespace faslab::recovery
