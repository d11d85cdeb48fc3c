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

#include "faslab/types.hpp"

namespace faslab::model
{

//! sin(x)/x with the removable singularity filled in: sinc(0) = 1.
inline double sinc(double x)
{
    if (x == 0.0)
        return 1.0;
    return std::sin(x) / x;
}

/*!
 * Draws L multipath parameters: gains i.i.d. circularly-symmetric complex
 * Gaussian with unit variance, angles i.i.d. uniform on (0, pi], delays i.i.d.
 * uniform on [0, tau_max). Deterministic for a fixed seed.
 */
PathSet draw_paths(const SystemConfig& config, int L, std::uint64_t rng_seed);

/*!
 * Evaluates the ground-truth space-frequency grid,
 *
 *   G(m, k) = sum_l alpha_l * exp( j (omega_k + omega_c)/c * (r_m cos(theta_l) + c tau_l) ),
 *
 * with r_m = (m-1) W / M over rows and omega_k = (k/K - 1/2) B over columns
 * (1-based m, k; angular units). The per-path spatial phase advances by a
 * constant unit-modulus factor per row, so each column is filled by a
 * recurrence costing one complex multiply per entry.
 */
SpaceFrequencyGrid synthesize_sfg(const SystemConfig& config, const PathSet& paths);

//! Uniform evaluation grid in the delay-wavenumber plane.
struct SparseGrid
{
    double delta_k = 0.0;   // wavenumber resolution over [-1, 1]
    double delta_tau = 0.0; // delay resolution over [0, tau_max]
};

/*!
 * Evaluates the leaked delay-wavenumber image
 *
 *   g(k, tau) ~ W B sum_l alpha_l e^{j omega_c (tau_l - tau)} Lambda_l(k, tau),
 *   Lambda_l(k, tau) = sinc( W (2 omega_c - B)(k_l - k) / (4c) ) * sinc( B (tau_l - tau) / 2 ),
 *
 * on the uniform grid k_i = -1 + i*delta_k (while <= 1), tau_j = j*delta_tau
 * (while <= tau_max). Rows run over wavenumber, columns over delay. Used for
 * ground-truth sparse-domain visualization.
 */
CMatrix sparse_domain_synthesis(const SystemConfig& config, const PathSet& paths,
                                const SparseGrid& grid);

} // namespace faslab::model
