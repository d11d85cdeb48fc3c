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
#include <vector>

#include "faslab/types.hpp"

namespace faslab::link
{

//! Gaussian tail probability Q(x) = P(N(0,1) > x).
double q_function(double x);

/*!
 * Per-subcarrier uncoded QPSK error analysis under maximum-ratio combining of
 * the selected antennas. The SNR axis is defined against a shared noise
 * floor: sigma_w^2 = reference_gain / 10^(snr_db/10), where reference_gain
 * defaults to the mean combined gain of the evenly spread selection of the
 * same size, so different selection strategies face identical noise and
 * differ only through their channels.
 */
struct LinkConfig
{
    std::vector<double> snr_db_grid;
    int symbols_per_point = 4000;
    double reference_gain = 0.0; // <= 0: derive from the equal-spaced selection
};

//! Mean combined gain over subcarriers of the evenly spread n_select rows.
double snr_reference_gain(const CMatrix& grid, int n_select);

/*!
 * Monte Carlo bit error rate per SNR point, Gray-mapped QPSK with hard
 * decisions. The per-subcarrier combined channel is reduced to its scalar
 * sufficient statistic y = g x + sqrt(g) sigma n (g the combined gain, n unit
 * circular Gaussian), which is distributionally exact for MRC and avoids
 * drawing per-antenna noise. Deterministic per seed.
 */
std::vector<double> ber_monte_carlo(const CMatrix& grid, const std::vector<int>& selected,
                                    const LinkConfig& config, std::uint64_t seed);

/*!
 * Closed-form reference: mean over subcarriers of Q(sqrt(rho_k)) with rho_k
 * the post-combining per-bit SNR g_k / sigma_w^2.
 */
std::vector<double> ber_analytic(const CMatrix& grid, const std::vector<int>& selected,
                                 const LinkConfig& config);

} // namespace faslab::link
