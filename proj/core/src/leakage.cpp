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

#include "faslab/leakage.hpp"

#include <cmath>

namespace faslab::leakage
{

double power_threshold(double sigma_w_sq)
{
    if (!(sigma_w_sq >= 0.0))
        throw std::invalid_argument("power_threshold: noise variance must be nonnegative");
    return sigma_w_sq < 0.5 ? 0.5 : sigma_w_sq;
}

double gamma_tau(int K, double tau_max, double B_angular, double T)
{
    if (K < 1 || !(tau_max > 0.0) || !(B_angular > 0.0) || !(T > 0.0))
        throw std::invalid_argument("gamma_tau: all parameters must be positive");
    return 4.0 * K / (tau_max * B_angular * std::sqrt(T));
}

double gamma_wavenumber(int M, double aperture_wavelengths, double beta, double T)
{
    if (M < 1 || !(aperture_wavelengths > 0.0) || !(T > 0.0))
        throw std::invalid_argument("gamma_wavenumber: all parameters must be positive");
    if (!(beta > 0.0) || !(beta < 2.0))
        throw std::invalid_argument("gamma_wavenumber: fractional bandwidth must lie in (0, 2)");
    return 2.0 * M / (std::numbers::pi * std::sqrt(T) * aperture_wavelengths * (2.0 - beta));
}

double lemma1_bound(double B_angular, double W, double omega_c, double delta_tau, double delta_k,
                    double T, double c)
{
    if (!(B_angular > 0.0) || !(W > 0.0) || !(omega_c > 0.0) || !(delta_tau > 0.0) ||
        !(delta_k > 0.0) || !(T > 0.0) || !(c > 0.0))
        throw std::invalid_argument("lemma1_bound: all parameters must be positive");
    if (!(B_angular < 2.0 * omega_c))
        throw std::invalid_argument("lemma1_bound: bandwidth must stay below twice the carrier");
    return 32.0 * c / (delta_tau * delta_k * T * B_angular * W * (2.0 * omega_c - B_angular));
}

long empirical_leakage_count(const SystemConfig& config, double theta, double tau,
                             const model::SparseGrid& grid, double T)
{
    config.validate();
    if (!(grid.delta_k > 0.0) || !(grid.delta_tau > 0.0) || !(T > 0.0))
        throw std::invalid_argument("empirical_leakage_count: resolutions and T must be positive");

    const double W = config.aperture();
    const double B = config.bandwidth_angular();
    const double wc = config.omega_c();
    const double k_l = std::cos(theta);
    const double half_k = 4.0 * config.c / (W * std::sqrt(T) * (2.0 * wc - B));
    const double half_tau = 2.0 / (B * std::sqrt(T));

    const int nk = static_cast<int>(std::floor(2.0 / grid.delta_k)) + 1;
    const int nt = static_cast<int>(std::floor(config.tau_max_s / grid.delta_tau)) + 1;

    long in_k = 0;
    for (int i = 0; i < nk; ++i)
        if (std::abs(k_l - (-1.0 + i * grid.delta_k)) <= half_k)
            ++in_k;
    long in_tau = 0;
    for (int j = 0; j < nt; ++j)
        if (std::abs(tau - j * grid.delta_tau) <= half_tau)
            ++in_tau;
    return in_k * in_tau;
}

LeakageParams derive_leakage_params(const SystemConfig& config, double sigma_w_sq,
                                    std::optional<int> gamma_override)
{
    config.validate();
    LeakageParams params;
    params.threshold = power_threshold(sigma_w_sq);
    params.gamma_tau =
        gamma_tau(config.K, config.tau_max_s, config.bandwidth_angular(), params.threshold);
    params.gamma_k =
        gamma_wavenumber(config.M, config.aperture_wavelengths, config.beta(), params.threshold);
    params.delta_tau = config.tau_max_s / config.K;
    params.delta_k = 2.0 / config.M;
    if (gamma_override)
    {
        if (*gamma_override < 1)
            throw std::invalid_argument("derive_leakage_params: gamma override must be >= 1");
        params.gamma = *gamma_override;
    }
    else
    {
        double product = std::max(1.0, params.gamma_tau) * std::max(1.0, params.gamma_k);
        params.gamma = static_cast<int>(std::max(1.0, std::round(product)));
    }
    return params;
}

} // namespace faslab::leakage
