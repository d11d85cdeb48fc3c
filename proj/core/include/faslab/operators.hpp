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
#include <list>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <utility>
#include <vector>

#include "faslab/numerics.hpp"
#include "faslab/types.hpp"

namespace faslab::op
{

/*!
 * Which grid entries the receiver observes: antenna (row) indices within
 * {0..M-1}, pilot (column) indices within {0..K-1}, and the unit-modulus pilot
 * symbols scaling each observed column. Indices are sorted and duplicate-free.
 */
struct SamplingPlan
{
    std::vector<int> antenna_indices; // I_r, size N_r
    std::vector<int> pilot_indices;   // I_p, size N_p
    CVector pilot_symbols;            // s, one per pilot

    int n_antennas() const { return static_cast<int>(antenna_indices.size()); }
    int n_pilots() const { return static_cast<int>(pilot_indices.size()); }

    void validate(const SystemConfig& config) const;

    //! All rows and columns observed, unit pilots.
    static SamplingPlan full(const SystemConfig& config);

    //! Uniformly random distinct antenna/pilot indices, unit pilots; deterministic per seed.
    static SamplingPlan random(const SystemConfig& config, int n_antennas, int n_pilots,
                               std::uint64_t seed);

    //! Equal-spaced antenna rows, uniformly random pilots, unit pilots.
    static SamplingPlan equal_spaced_antennas(const SystemConfig& config, int n_antennas,
                                              int n_pilots, std::uint64_t seed);
};

/*!
 * Incomplete observation of the grid: y0 vectorizes the N_r x N_p observed
 * matrix column-major, i.e. entry (n_r, n_p) sits at index n_p*N_r + n_r.
 */
struct Observation
{
    CVector y0;
    double noise_sigma = 0.0;
    SamplingPlan plan;
};

//! Frequency-dependent array manifold a_m = exp(j (m-1) W (omega_k + omega_c) k / (c M)).
CVector manifold_vector(const SystemConfig& config, double wavenumber, double omega_k);

/*!
 * The structured linear maps of the compressed observation model, matrix-free:
 * the dictionary D = Omega * Psi (per-frequency array manifolds over the
 * uniform wavenumber grid composed with a unitary DFT along the delay axis)
 * and the measurement M = S * D (antenna/pilot selection with pilot scaling).
 *
 * Domain vectors of length M*K vectorize the M x K delay-wavenumber coefficient
 * matrix column-major (columns = delay taps); range vectors of length N_r*N_p
 * follow the Observation layout. Immutable after construction and shareable
 * across threads; forward/adjoint calls are reentrant. Column extraction keeps
 * an internally synchronized LRU cache because the greedy solvers re-request
 * the same growing support every iteration.
 */
class MeasurementOperator
{
  public:
    //! cache_capacity = 0 selects the default (4096 columns).
    MeasurementOperator(const SystemConfig& config, SamplingPlan plan,
                        std::size_t cache_capacity = 0);

    const SystemConfig& config() const { return config_; }
    const SamplingPlan& plan() const { return plan_; }
    Eigen::Index domain_dim() const { return static_cast<Eigen::Index>(config_.M) * config_.K; }
    Eigen::Index range_dim() const
    {
        return static_cast<Eigen::Index>(plan_.n_antennas()) * plan_.n_pilots();
    }

    //! g = D x: full dictionary synthesis onto the M x K grid (vectorized).
    CVector apply_dictionary(const CVector& x) const;

    //! x = D^H g: analysis coefficients of a grid vector.
    CVector apply_dictionary_adjoint(const CVector& g) const;

    //! y = S D x: forward measurement of a coefficient vector.
    CVector apply_measurement(const CVector& x) const;

    //! x = (S D)^H y: adjoint measurement (correlation image of an observation).
    CVector apply_measurement_adjoint(const CVector& y) const;

    /*!
     * Materializes the measurement columns listed in T (each equal to
     * apply_measurement of the corresponding unit vector), serving them from
     * the cache when possible.
     */
    CMatrix extract_columns(const std::vector<int>& T) const;

    /*!
     * Every measurement column has the same Euclidean norm (manifold and DFT
     * entries are unit modulus, pilots scale whole rows), returned here in
     * closed form; correlation ranking divides by it.
     */
    double column_norm() const { return column_norm_; }

    /*!
     * Antenna-row slice of the manifold block of the pilot-th selected
     * frequency (an N_r x M matrix). Exposed because the dense least-squares
     * baseline factors M M^H into one Hermitian block per pilot built from
     * exactly these slices.
     */
    const CMatrix& selected_manifold(int pilot) const
    {
        return selected_manifolds_.at(static_cast<std::size_t>(pilot));
    }

    /*!
     * Power-iteration estimate of the frame bounds of D, i.e. the extreme
     * eigenvalues (lower, upper) of D D^H. A tight frame would return two
     * equal values; the oversampled manifold factors make the constructed
     * dictionary deviate, which is why this is a diagnostic, not an invariant.
     */
    std::pair<double, double> frame_bounds_estimate(int iters = 100) const;

  private:
    CVector column(int index) const;
    CVector column_uncached(int index) const;

    SystemConfig config_;
    SamplingPlan plan_;
    numerics::UnitaryDft dft_;
    std::vector<CMatrix> manifolds_;          // A(omega_k), one M x M block per frequency
    std::vector<CMatrix> selected_manifolds_; // antenna-row slices per selected pilot
    double column_norm_ = 0.0;

    struct Lru
    {
        std::size_t capacity = 0;
        std::list<int> order;
        std::unordered_map<int, std::pair<CVector, std::list<int>::iterator>> entries;
    };
    mutable Lru cache_;
    mutable std::mutex cache_mutex_;
};

/*!
 * Observes the grid through the plan: Y = S_r G S_p^T + Z with Z i.i.d.
 * circular complex Gaussian of per-entry variance sigma_w^2, vectorized
 * column-major. Deterministic per seed.
 */
Observation observe(const SpaceFrequencyGrid& sfg, const SamplingPlan& plan, double sigma_w,
                    std::uint64_t rng_seed);

/*!
 * Noise level realizing a target SNR under the convention
 * sigma_w^2 = mean(|selected pilot-scaled entries|^2) / 10^(snr_db/10).
 */
double sigma_for_snr_db(const SpaceFrequencyGrid& sfg, const SamplingPlan& plan, double snr_db);

} // namespace faslab::op
