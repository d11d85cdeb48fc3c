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

#include "faslab/model.hpp"

#include <cmath>

#include "faslab/rng.hpp"

namespace faslab
{

void SystemConfig::validate(bool strict_grid) const
{
    const int min_grid = strict_grid ? 2 : 1;
    if (M < min_grid || K < min_grid)
        throw std::invalid_argument("SystemConfig: grid sizes below the minimum");
    if (!(aperture_wavelengths > 0.0) || !(bandwidth_hz > 0.0) || !(carrier_hz > 0.0) ||
        !(tau_max_s > 0.0) || !(c > 0.0))
        throw std::invalid_argument("SystemConfig: physical parameters must be positive");
    if (!(bandwidth_hz < 2.0 * carrier_hz))
        throw std::invalid_argument("SystemConfig: bandwidth must stay below twice the carrier");
}

void PathSet::validate(const SystemConfig& config) const
{
    const std::size_t L = alphas.size();
    if (L == 0 || thetas.size() != L || taus.size() != L)
        throw std::invalid_argument("PathSet: arrays must share a common length L >= 1");
    for (double theta : thetas)
        if (!(theta >= 0.0) || !(theta <= std::numbers::pi))
            throw std::invalid_argument("PathSet: theta outside [0, pi]");
    for (double tau : taus)
        if (!(tau >= 0.0) || !(tau <= config.tau_max_s))
            throw std::invalid_argument("PathSet: tau outside [0, tau_max]");
}

namespace model
{

PathSet draw_paths(const SystemConfig& config, int L, std::uint64_t rng_seed)
{
    config.validate();
    if (L < 1)
        throw std::invalid_argument("draw_paths: L must be >= 1");

    Rng rng(rng_seed);
    PathSet paths;
    paths.alphas.reserve(static_cast<std::size_t>(L));
    paths.thetas.reserve(static_cast<std::size_t>(L));
    paths.taus.reserve(static_cast<std::size_t>(L));
    for (int l = 0; l < L; ++l)
    {
        paths.alphas.push_back(rng.complex_normal());
        // 1 - u maps [0, 1) onto (0, 1], keeping theta in (0, pi]
        paths.thetas.push_back(std::numbers::pi * (1.0 - rng.uniform01()));
        paths.taus.push_back(config.tau_max_s * rng.uniform01());
    }
    return paths;
}

SpaceFrequencyGrid synthesize_sfg(const SystemConfig& config, const PathSet& paths)
{
    config.validate();
    paths.validate(config);

    const int M = config.M;
    const int K = config.K;
    CMatrix G = CMatrix::Zero(M, K);
    const double step = config.aperture() / M; // spatial increment r_{m+1} - r_m

    for (std::size_t l = 0; l < paths.size(); ++l)
    {
        const double cos_theta = std::cos(paths.thetas[l]);
        const double tau = paths.taus[l];
        const cplx alpha = paths.alphas[l];
        for (int k = 0; k < K; ++k)
        {
            const double omega = config.omega(k) + config.omega_c();
            // row 0 carries only the delay phase; each further row advances by `ratio`
            cplx term = alpha * std::polar(1.0, omega * tau);
            const cplx ratio = std::polar(1.0, omega * step * cos_theta / config.c);
            for (int m = 0; m < M; ++m)
            {
                G(m, k) += term;
                term *= ratio;
            }
        }
    }
    return {std::move(G), config};
}

CMatrix sparse_domain_synthesis(const SystemConfig& config, const PathSet& paths,
                                const SparseGrid& grid)
{
    config.validate();
    paths.validate(config);
    if (!(grid.delta_k > 0.0) || !(grid.delta_tau > 0.0))
        throw std::invalid_argument("sparse_domain_synthesis: resolutions must be positive");

    const double W = config.aperture();
    const double B = config.bandwidth_angular();
    const double wc = config.omega_c();
    const int nk = static_cast<int>(std::floor(2.0 / grid.delta_k)) + 1;
    const int nt = static_cast<int>(std::floor(config.tau_max_s / grid.delta_tau)) + 1;

    CMatrix out = CMatrix::Zero(nk, nt);
    for (std::size_t l = 0; l < paths.size(); ++l)
    {
        const double k_l = std::cos(paths.thetas[l]);
        const double tau_l = paths.taus[l];
        const cplx alpha = paths.alphas[l];
        for (int i = 0; i < nk; ++i)
        {
            const double k = -1.0 + i * grid.delta_k;
            const double lobe_k = sinc(W * (2.0 * wc - B) * (k_l - k) / (4.0 * config.c));
            for (int j = 0; j < nt; ++j)
            {
                const double tau = j * grid.delta_tau;
                const double lobe_tau = sinc(B * (tau_l - tau) / 2.0);
                out(i, j) += W * B * alpha * std::polar(1.0, wc * (tau_l - tau)) * lobe_k * lobe_tau;
            }
        }
    }
    return out;
}

} // namespace model
} // namespace faslab
