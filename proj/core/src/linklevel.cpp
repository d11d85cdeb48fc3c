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

#include "faslab/linklevel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "faslab/equalization.hpp"
#include "faslab/rng.hpp"

namespace faslab::link
{

namespace
{

double resolve_reference_gain(const CMatrix& grid, const std::vector<int>& selected,
                              const LinkConfig& config)
{
    if (config.reference_gain > 0.0)
        return config.reference_gain;
    return snr_reference_gain(grid, static_cast<int>(selected.size()));
}

void check_inputs(const CMatrix& grid, const std::vector<int>& selected, const LinkConfig& config)
{
    if (selected.empty())
        throw std::invalid_argument("link: empty antenna selection");
    if (config.snr_db_grid.empty())
        throw std::invalid_argument("link: empty SNR grid");
    if (config.symbols_per_point < 1)
        throw std::invalid_argument("link: need at least one symbol per point");
    for (int m : selected)
        if (m < 0 || m >= grid.rows())
            throw std::invalid_argument("link: antenna index out of range");
}

} // namespace

double q_function(double x)
{
    return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double snr_reference_gain(const CMatrix& grid, int n_select)
{
    const std::vector<int> rows = eq::equal_spaced(static_cast<int>(grid.rows()), n_select);
    const RVector gains = eq::combined_gains(grid, rows);
    const double mean = gains.mean();
    if (!(mean > 0.0))
        throw std::invalid_argument("snr_reference_gain: zero-gain reference selection");
    return mean;
}

std::vector<double> ber_monte_carlo(const CMatrix& grid, const std::vector<int>& selected,
                                    const LinkConfig& config, std::uint64_t seed)
{
    check_inputs(grid, selected, config);
    const double reference = resolve_reference_gain(grid, selected, config);
    const RVector gains = eq::combined_gains(grid, selected);
    const int K = static_cast<int>(gains.size());
    const double amp = 1.0 / std::numbers::sqrt2; // unit-energy QPSK, +-amp per rail

    std::vector<double> ber;
    ber.reserve(config.snr_db_grid.size());
    for (std::size_t point = 0; point < config.snr_db_grid.size(); ++point)
    {
        const double sigma_sq = reference / std::pow(10.0, config.snr_db_grid[point] / 10.0);
        const double sigma = std::sqrt(sigma_sq);
        Rng rng(derive_seed(seed, {0xbe5ULL, static_cast<std::uint64_t>(point)}));

        long long errors = 0;
        for (int sym = 0; sym < config.symbols_per_point; ++sym)
            for (int k = 0; k < K; ++k)
            {
                const std::uint64_t bits = rng.uniform_below(4);
                const double re = (bits & 1u) ? -amp : amp;
                const double im = (bits & 2u) ? -amp : amp;
                const double g = gains(k);
                // Scalar sufficient statistic of the combined receiver:
                // y = g x + sqrt(g) sigma n, one draw per subcarrier symbol.
                const cplx noise = rng.complex_normal();
                const double y_re = g * re + std::sqrt(g) * sigma * noise.real();
                const double y_im = g * im + std::sqrt(g) * sigma * noise.imag();
                errors += ((y_re < 0.0) != (re < 0.0)) ? 1 : 0;
                errors += ((y_im < 0.0) != (im < 0.0)) ? 1 : 0;
            }
        ber.push_back(static_cast<double>(errors) /
                      (2.0 * static_cast<double>(config.symbols_per_point) * K));
    }
    return ber;
}

std::vector<double> ber_analytic(const CMatrix& grid, const std::vector<int>& selected,
                                 const LinkConfig& config)
{
    check_inputs(grid, selected, config);
    const double reference = resolve_reference_gain(grid, selected, config);
    const RVector gains = eq::combined_gains(grid, selected);

    std::vector<double> ber;
    ber.reserve(config.snr_db_grid.size());
    for (double snr_db : config.snr_db_grid)
    {
        const double sigma_sq = reference / std::pow(10.0, snr_db / 10.0);
        double sum = 0.0;
        for (Eigen::Index k = 0; k < gains.size(); ++k)
            sum += q_function(std::sqrt(gains(k) / sigma_sq));
        ber.push_back(sum / static_cast<double>(gains.size()));
    }
    return ber;
}

} // namespace faslab::link
