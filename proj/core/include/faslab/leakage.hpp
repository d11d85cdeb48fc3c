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

#include <optional>

#include "faslab/model.hpp"
#include "faslab/types.hpp"

namespace faslab::leakage
{

/*!
 * Noise-adaptive power threshold: leakage below this level is treated as
 * insignificant. Returns 1/2 when the noise variance is below 0.5 and the
 * noise variance itself otherwise (monotone nondecreasing).
 */
double power_threshold(double sigma_w_sq);

/*!
 * Delay-domain leakage coefficient 4K / (tau_max * B * sqrt(T)): the number of
 * delay grid cells whose leakage power exceeds T around a path. B is angular.
 * Falls below 1 at critical delay sampling (no delay leakage).
 */
double gamma_tau(int K, double tau_max, double B_angular, double T);

/*!
 * Wavenumber-domain leakage coefficient 2M / (pi * sqrt(T) * N_lambda * (2 - beta)).
 * Requires the fractional bandwidth beta < 2; tends to sqrt(2) M / (N_lambda pi)
 * in the narrowband limit.
 */
double gamma_wavenumber(int M, double aperture_wavelengths, double beta, double T);

/*!
 * Closed-form cap on the number of grid samples inside a path's leakage
 * region: 32 c / (dtau * dk * T * B * W * (2 omega_c - B)). Equals the product
 * of the full rectangle widths in grid cells, 4 * (half-width_tau / dtau) *
 * (half-width_k / dk).
 */
double lemma1_bound(double B_angular, double W, double omega_c, double delta_tau, double delta_k,
                    double T, double c = 2.99792458e8);

/*!
 * Counts the grid points (k, tau) on the uniform grid over [-1,1] x [0,tau_max]
 * whose squared leakage envelope exceeds T around a single path, using the
 * per-axis rectangle relaxation of the envelope support:
 *
 *   |k_l - k|   <= 4c / (W sqrt(T) (2 omega_c - B))   and
 *   |tau_l-tau| <= 2 / (B sqrt(T)).
 *
 * (The raw product-form envelope diverges along either axis through the path,
 * so its superlevel set is unbounded there; the rectangle is the form the
 * count bound above is stated for.) A grid point coinciding with the path
 * always satisfies both conditions, so the count is at least 1 for on-grid
 * paths no matter how large T grows.
 */
long empirical_leakage_count(const SystemConfig& config, double theta, double tau,
                             const model::SparseGrid& grid, double T);

/*!
 * Leakage summary for one configuration: threshold, raw coefficients, the
 * integer group size gamma used by group-sparse recovery, and the grid
 * resolutions the count bound is parameterized by. gamma is round-to-nearest
 * of max(1, gamma_tau) * max(1, gamma_k) (a sub-unit factor means no leakage
 * in that domain) unless explicitly overridden.
 */
struct LeakageParams
{
    double threshold = 0.5;
    double gamma_tau = 0.0;
    double gamma_k = 0.0;
    int gamma = 1;
    double delta_tau = 0.0;
    double delta_k = 0.0;
};

/*!
 * Derives LeakageParams for a configuration and noise level. The default grid
 * resolutions follow the dictionary accounting delta_tau = tau_max / K and
 * delta_k = 2 / M (the substitutions under which the coefficient product and
 * the count bound coincide).
 */
LeakageParams derive_leakage_params(const SystemConfig& config, double sigma_w_sq,
                                    std::optional<int> gamma_override = std::nullopt);

} // namespace faslab::leakage
