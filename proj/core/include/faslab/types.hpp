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

#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace faslab
{

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

/*!
 * Physical and grid parameters of the receiver: spatial grid size M over the
 * aperture, frequency grid size K over the signal band, aperture length in
 * carrier wavelengths, bandwidth/carrier in Hz, maximal delay spread, and the
 * propagation speed. Frequencies are stored in Hz and converted to angular
 * units once through the accessors below; all internal formulas are angular.
 */
struct SystemConfig
{
    int M = 64;                        // spatial grid points over the aperture
    int K = 64;                        // frequency grid points over the band
    double aperture_wavelengths = 10.0; // N_lambda, aperture W = N_lambda * lambda_c
    double bandwidth_hz = 2.0e8;       // B / 2pi
    double carrier_hz = 5.8e9;         // omega_c / 2pi
    double tau_max_s = 2.0e-7;         // maximal delay spread
    double c = 2.99792458e8;           // propagation speed, m/s

    double omega_c() const { return 2.0 * std::numbers::pi * carrier_hz; }
    double bandwidth_angular() const { return 2.0 * std::numbers::pi * bandwidth_hz; }
    double wavelength() const { return c / carrier_hz; }
    double aperture() const { return aperture_wavelengths * wavelength(); } // W
    double beta() const { return bandwidth_hz / carrier_hz; }               // fractional bandwidth

    /*!
     * Spatial sample position r_m = (m-1) * W / M for the 1-based index m,
     * i.e. position(0) == 0 so the array manifold starts at phase zero.
     */
    double position(int m) const { return static_cast<double>(m) * aperture() / M; }

    //! Angular subcarrier frequency omega_k = (k/K - 1/2) * B for 1-based k = k0+1.
    double omega(int k0) const
    {
        return (static_cast<double>(k0 + 1) / K - 0.5) * bandwidth_angular();
    }

    //! Uniform wavenumber grid point k_q = -1 + 2q/M on the half-open interval [-1, 1).
    double wavenumber(int q0) const { return -1.0 + 2.0 * static_cast<double>(q0) / M; }

    //! Delay of the q-th dictionary tap under the unitary DFT along the frequency axis.
    double dictionary_delay(int t0) const
    {
        return 2.0 * std::numbers::pi * static_cast<double>(t0) / bandwidth_angular();
    }

    /*!
     * Throws std::invalid_argument when the parameters leave the model's
     * domain. The factor (2 omega_c - B) appearing in the wavenumber leakage
     * width must stay positive, hence bandwidth < 2 * carrier. `strict_grid`
     * additionally demands M, K >= 2 (experiment configurations); the relaxed
     * form accepts degenerate single-point grids, which the closed-form
     * evaluations remain well defined on.
     */
    void validate(bool strict_grid = false) const;
};

/*!
 * The L stochastic multipath parameters: complex gains, angles of arrival in
 * [0, pi] and delays in [0, tau_max]. Immutable value type; arrays always have
 * a common length L >= 1.
 */
struct PathSet
{
    std::vector<cplx> alphas;
    std::vector<double> thetas;
    std::vector<double> taus;

    std::size_t size() const { return alphas.size(); }

    //! Throws std::invalid_argument on length mismatch or out-of-range entries.
    void validate(const SystemConfig& config) const;
};

/*!
 * The M x K complex channel matrix G: column k is the space-selective response
 * at angular frequency omega_k = (k/K - 1/2) * B, row m the frequency-selective
 * response at position r_m.
 */
struct SpaceFrequencyGrid
{
    CMatrix entries;
    SystemConfig config;
};

} // namespace faslab
