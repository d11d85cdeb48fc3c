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
#include <optional>
#include <string>
#include <vector>

#include "faslab/serialize.hpp"
#include "faslab/types.hpp"

namespace faslab::exp
{

/*!
 * Batch experiment description, loadable from versioned JSON. Axis lists are
 * swept as a full cross product; single-element lists pin an axis. All
 * randomness derives from the single master seed, so re-running a spec
 * reproduces every output byte-for-byte regardless of the worker count.
 */
struct ExperimentSpec
{
    int schema_version = 1;
    std::string name = "desk";
    SystemConfig system; // desk scale (64 x 64) by default
    int trials = 20;
    std::uint64_t seed = 1;
    std::string output_dir = "out";

    // Sweep axes.
    std::vector<int> path_counts = {40};              // L
    std::vector<double> snr_db = {10.0};              // pilot-observation SNR
    std::vector<int> n_antennas = {20};               // N_r
    std::vector<int> n_pilots = {40};                 // N_p
    std::vector<double> aperture_wavelengths = {10.0};
    std::vector<std::string> methods;                  // empty: subcommand default

    // Recovery knobs.
    std::optional<int> gamma_override;
    int max_iterations = 50;

    // Link-level knobs.
    std::vector<double> ber_snr_db = {0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0};
    int symbols_per_point = 2000;

    // Selection-solver knobs.
    long long random_draws = 100;
    long long bb_max_nodes = 50'000'000;
    double bb_max_seconds = 30.0;

    void validate() const;
};

ExperimentSpec spec_from_json(const io::json& j);
io::json to_json(const ExperimentSpec& spec);

struct RunOptions
{
    std::optional<std::uint64_t> seed;     // overrides the spec seed
    std::optional<std::string> out_dir;    // overrides the spec output dir
    int workers = 1;
    bool paper_scale = false; // restore the full 128 x 128 grid
};

//! The spec with the run options folded in (seed/out overrides, grid scaling).
ExperimentSpec resolve(ExperimentSpec spec, const RunOptions& options);

//! Default residual stopping threshold: sqrt(range dimension) * sigma_w.
double residual_threshold(Eigen::Index range_dim, double sigma_w);

/*!
 * Subcommand runners. Each writes CSV/JSON files under the resolved output
 * directory, prints a short human summary to stdout, and returns 0; malformed
 * specs or method names throw std::invalid_argument. Outputs are written in
 * job order through a single sink, so the worker count never changes a byte.
 *
 *  - run_synth: per-trial path sets (JSON), space-frequency grids and
 *    delay-wavenumber ground truth (complex CSV), plus a summary CSV.
 *  - run_estimate: compressed-observation recovery across the spec axes;
 *    one row per (axis point, trial, method) with the relative error.
 *  - run_equalize: selection methods on per-trial channels; a detail CSV and
 *    a timing summary CSV (method, avg_time_s).
 *  - run_ber: Monte-Carlo BER curves per selection method.
 *  - run_sweep: figure-style recipes; the figure number pins the swept axis
 *    (3: SNR, 5: antenna count, 7: aperture with paired antenna counts,
 *    8: BER curves) and the method set.
 *  - run_diagnose: leakage coefficients, coherence report, frame bounds and
 *    reconstruction-bound constants for the configured system.
 */
int run_synth(const ExperimentSpec& spec, const RunOptions& options);
int run_estimate(const ExperimentSpec& spec, const RunOptions& options);
int run_equalize(const ExperimentSpec& spec, const RunOptions& options);
int run_ber(const ExperimentSpec& spec, const RunOptions& options);
int run_sweep(const ExperimentSpec& spec, const RunOptions& options, int figure);
int run_diagnose(const ExperimentSpec& spec, const RunOptions& options);

} // namespace faslab::exp
