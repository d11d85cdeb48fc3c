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

#include "faslab/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "faslab/equalization.hpp"
#include "faslab/leakage.hpp"
#include "faslab/linklevel.hpp"
#include "faslab/model.hpp"
#include "faslab/operators.hpp"
#include "faslab/recovery.hpp"
#include "faslab/rng.hpp"

namespace faslab::exp
{

namespace
{

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;
using Row = std::vector<std::string>;
using Rows = std::vector<Row>;

// Disjoint seed-path tags so no two random streams can collide.
constexpr std::uint64_t tag_channel = 0x11;
constexpr std::uint64_t tag_plan = 0x12;
constexpr std::uint64_t tag_noise = 0x13;
constexpr std::uint64_t tag_ber = 0x14;
constexpr std::uint64_t tag_subset = 0x15;
constexpr std::uint64_t tag_coherence = 0x16;

std::uint64_t bits_of(double v)
{
    return std::bit_cast<std::uint64_t>(v);
}

double elapsed_s(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

/*!
 * Runs job(0..n_jobs-1) on a small worker pool. Jobs write only into
 * preallocated per-index slots; the caller serializes file output afterwards
 * in index order, which keeps results independent of the worker count.
 */
void run_jobs(int workers, int n_jobs, const std::function<void(int)>& job)
{
    workers = std::clamp(workers, 1, std::max(1, n_jobs));
    if (workers == 1)
    {
        for (int i = 0; i < n_jobs; ++i)
            job(i);
        return;
    }

    std::atomic<int> next{0};
    std::mutex error_mutex;
    std::exception_ptr error;
    auto work = [&]() {
        while (true)
        {
            const int i = next.fetch_add(1);
            if (i >= n_jobs)
                return;
            {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (error)
                    return;
            }
            try
            {
                job(i);
            }
            catch (...)
            {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error)
                    error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
        pool.emplace_back(work);
    for (std::thread& t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

enum class RecoveryMethod
{
    dcgomp,
    omp,
    gomp,
    ls,
};

RecoveryMethod parse_recovery_method(const std::string& name)
{
    if (name == "dcgomp")
        return RecoveryMethod::dcgomp;
    if (name == "omp")
        return RecoveryMethod::omp;
    if (name == "gomp")
        return RecoveryMethod::gomp;
    if (name == "ls")
        return RecoveryMethod::ls;
    throw std::invalid_argument("unknown recovery method '" + name +
                                "' (expected dcgomp, omp, gomp or ls)");
}

struct SelectionMethod
{
    enum class Kind
    {
        bb,
        grsip,
        equal,
        random,
    };
    Kind kind = Kind::bb;
    long long draws = 0;
    std::string label;
};

SelectionMethod parse_selection_method(const std::string& name)
{
    SelectionMethod m;
    m.label = name;
    if (name == "bb")
        m.kind = SelectionMethod::Kind::bb;
    else if (name == "grsip")
        m.kind = SelectionMethod::Kind::grsip;
    else if (name == "equal")
        m.kind = SelectionMethod::Kind::equal;
    else if (name.rfind("random:", 0) == 0)
    {
        m.kind = SelectionMethod::Kind::random;
        try
        {
            m.draws = std::stoll(name.substr(7));
        }
        catch (const std::exception&)
        {
            throw std::invalid_argument("malformed draw count in '" + name + "'");
        }
        if (m.draws < 1)
            throw std::invalid_argument("draw count must be positive in '" + name + "'");
    }
    else
        throw std::invalid_argument("unknown selection method '" + name +
                                    "' (expected bb, grsip, equal or random:<draws>)");
    return m;
}

struct ChannelDraw
{
    SystemConfig config;
    PathSet paths;
    SpaceFrequencyGrid sfg;
    std::uint64_t seed = 0;
};

ChannelDraw draw_channel(const ExperimentSpec& spec, double aperture, int n_paths, int trial)
{
    ChannelDraw out;
    out.config = spec.system;
    out.config.aperture_wavelengths = aperture;
    out.config.validate(true);
    out.seed = derive_seed(spec.seed, {tag_channel, static_cast<std::uint64_t>(trial),
                                       static_cast<std::uint64_t>(n_paths), bits_of(aperture)});
    out.paths = model::draw_paths(out.config, n_paths, out.seed);
    out.sfg = model::synthesize_sfg(out.config, out.paths);
    return out;
}

eq::EqualizationSolution run_selection(const ExperimentSpec& spec, const SelectionMethod& method,
                                       const eq::EqualizationProblem& problem, int trial,
                                       std::size_t method_index)
{
    switch (method.kind)
    {
    case SelectionMethod::Kind::bb:
    {
        eq::BranchBudget budget;
        budget.max_nodes = spec.bb_max_nodes;
        budget.max_seconds = spec.bb_max_seconds;
        return eq::branch_and_bound(problem, budget);
    }
    case SelectionMethod::Kind::grsip:
        return eq::grsip(problem);
    case SelectionMethod::Kind::random:
        return eq::random_baseline(problem, method.draws,
                                   derive_seed(spec.seed,
                                               {tag_subset, static_cast<std::uint64_t>(trial),
                                                static_cast<std::uint64_t>(method_index)}));
    case SelectionMethod::Kind::equal:
    default:
    {
        const auto t0 = Clock::now();
        eq::EqualizationSolution sol;
        sol.selected =
            eq::equal_spaced(static_cast<int>(problem.weights.rows()), problem.n_select);
        sol.objective = eq::min_column_sum(problem.weights, sol.selected);
        sol.certificate = eq::Certificate::heuristic;
        sol.wall_time_s = elapsed_s(t0);
        return sol;
    }
    }
}

double db_ratio(double value, double reference)
{
    return 10.0 * std::log10(value / reference);
}

void require(bool condition, const std::string& message)
{
    if (!condition)
        throw std::invalid_argument(message);
}

template <typename T>
void read_axis(const io::json& j, const char* key, std::vector<T>& axis)
{
    if (j.contains(key))
    {
        axis = j.at(key).get<std::vector<T>>();
        require(!axis.empty(), std::string("spec: axis '") + key + "' must be nonempty");
    }
}

void check_keys(const io::json& j, const char* where, std::initializer_list<const char*> allowed)
{
    for (const auto& item : j.items())
    {
        bool known = false;
        for (const char* key : allowed)
            if (item.key() == key)
            {
                known = true;
                break;
            }
        require(known, std::string("spec: unknown key '") + item.key() + "' in " + where);
    }
}

} // namespace

void ExperimentSpec::validate() const
{
    require(schema_version == 1, "spec: unsupported schema_version");
    require(!name.empty(), "spec: empty name");
    require(trials >= 1, "spec: trials must be >= 1");
    system.validate(true);
    require(!path_counts.empty() && !snr_db.empty() && !n_antennas.empty() &&
                !n_pilots.empty() && !aperture_wavelengths.empty(),
            "spec: every sweep axis must be nonempty");
    for (int L : path_counts)
        require(L >= 1, "spec: path counts must be positive");
    for (int n : n_antennas)
        require(n >= 1 && n <= system.M, "spec: antenna counts must lie in [1, M]");
    for (int n : n_pilots)
        require(n >= 1 && n <= system.K, "spec: pilot counts must lie in [1, K]");
    for (double a : aperture_wavelengths)
        require(a > 0.0, "spec: apertures must be positive");
    require(max_iterations >= 1, "spec: max_iterations must be >= 1");
    require(!gamma_override || *gamma_override >= 1, "spec: gamma override must be >= 1");
    require(!ber_snr_db.empty(), "spec: BER SNR grid must be nonempty");
    require(symbols_per_point >= 1, "spec: symbols_per_point must be >= 1");
    require(random_draws >= 1, "spec: random_draws must be >= 1");
    require(bb_max_nodes >= 1, "spec: bb_max_nodes must be >= 1");
    require(bb_max_seconds > 0.0, "spec: bb_max_seconds must be positive");
    require(!output_dir.empty(), "spec: empty output_dir");
}

ExperimentSpec spec_from_json(const io::json& j)
{
    require(j.is_object(), "spec: top level must be a JSON object");
    check_keys(j, "the spec", {"schema_version", "name", "system", "trials", "seed", "output_dir",
                               "sweep", "recovery", "link", "selection"});

    ExperimentSpec spec;
    if (j.contains("schema_version"))
        spec.schema_version = j.at("schema_version").get<int>();
    if (j.contains("name"))
        spec.name = j.at("name").get<std::string>();
    if (j.contains("system"))
        spec.system = io::config_from_json(j.at("system"));
    if (j.contains("trials"))
        spec.trials = j.at("trials").get<int>();
    if (j.contains("seed"))
        spec.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("output_dir"))
        spec.output_dir = j.at("output_dir").get<std::string>();

    if (j.contains("sweep"))
    {
        const io::json& s = j.at("sweep");
        check_keys(s, "sweep", {"path_counts", "snr_db", "n_antennas", "n_pilots",
                                "aperture_wavelengths", "methods"});
        read_axis(s, "path_counts", spec.path_counts);
        read_axis(s, "snr_db", spec.snr_db);
        read_axis(s, "n_antennas", spec.n_antennas);
        read_axis(s, "n_pilots", spec.n_pilots);
        read_axis(s, "aperture_wavelengths", spec.aperture_wavelengths);
        if (s.contains("methods"))
            spec.methods = s.at("methods").get<std::vector<std::string>>();
    }
    if (j.contains("recovery"))
    {
        const io::json& r = j.at("recovery");
        check_keys(r, "recovery", {"gamma", "max_iterations"});
        if (r.contains("gamma"))
            spec.gamma_override = r.at("gamma").get<int>();
        if (r.contains("max_iterations"))
            spec.max_iterations = r.at("max_iterations").get<int>();
    }
    if (j.contains("link"))
    {
        const io::json& l = j.at("link");
        check_keys(l, "link", {"snr_db", "symbols_per_point"});
        read_axis(l, "snr_db", spec.ber_snr_db);
        if (l.contains("symbols_per_point"))
            spec.symbols_per_point = l.at("symbols_per_point").get<int>();
    }
    if (j.contains("selection"))
    {
        const io::json& s = j.at("selection");
        check_keys(s, "selection", {"random_draws", "max_nodes", "max_seconds"});
        if (s.contains("random_draws"))
            spec.random_draws = s.at("random_draws").get<long long>();
        if (s.contains("max_nodes"))
            spec.bb_max_nodes = s.at("max_nodes").get<long long>();
        if (s.contains("max_seconds"))
            spec.bb_max_seconds = s.at("max_seconds").get<double>();
    }
    spec.validate();
    return spec;
}

io::json to_json(const ExperimentSpec& spec)
{
    io::json j{{"schema_version", spec.schema_version},
               {"name", spec.name},
               {"system", io::to_json(spec.system)},
               {"trials", spec.trials},
               {"seed", spec.seed},
               {"output_dir", spec.output_dir},
               {"sweep",
                {{"path_counts", spec.path_counts},
                 {"snr_db", spec.snr_db},
                 {"n_antennas", spec.n_antennas},
                 {"n_pilots", spec.n_pilots},
                 {"aperture_wavelengths", spec.aperture_wavelengths},
                 {"methods", spec.methods}}},
               {"recovery", {{"max_iterations", spec.max_iterations}}},
               {"link", {{"snr_db", spec.ber_snr_db}, {"symbols_per_point", spec.symbols_per_point}}},
               {"selection",
                {{"random_draws", spec.random_draws},
                 {"max_nodes", spec.bb_max_nodes},
                 {"max_seconds", spec.bb_max_seconds}}}};
    if (spec.gamma_override)
        j["recovery"]["gamma"] = *spec.gamma_override;
    return j;
}

ExperimentSpec resolve(ExperimentSpec spec, const RunOptions& options)
{
    if (options.seed)
        spec.seed = *options.seed;
    if (options.out_dir)
        spec.output_dir = *options.out_dir;
    if (options.paper_scale)
    {
        spec.system.M = 128;
        spec.system.K = 128;
    }
    spec.validate();
    return spec;
}

double residual_threshold(Eigen::Index range_dim, double sigma_w)
{
    return std::sqrt(static_cast<double>(range_dim)) * sigma_w;
}

// ---------------------------------------------------------------------------
// synth

int run_synth(const ExperimentSpec& raw, const RunOptions& options)
{
    const ExperimentSpec spec = resolve(raw, options);
    const fs::path out(spec.output_dir);
    fs::create_directories(out);

    struct Job
    {
        int n_paths;
        double aperture;
        int trial;
    };
    std::vector<Job> jobs;
    for (int L : spec.path_counts)
        for (double aperture : spec.aperture_wavelengths)
            for (int trial = 0; trial < spec.trials; ++trial)
                jobs.push_back({L, aperture, trial});

    std::vector<Row> summary(jobs.size());
    run_jobs(options.workers, static_cast<int>(jobs.size()), [&](int i) {
        const Job& job = jobs[static_cast<std::size_t>(i)];
        const ChannelDraw channel = draw_channel(spec, job.aperture, job.n_paths, job.trial);

        const std::string stem = "synth_" + std::to_string(i);
        std::ofstream paths_file(out / (stem + "_paths.json"));
        paths_file << io::to_json(channel.paths).dump(2) << '\n';
        io::write_complex_matrix_csv((out / (stem + "_grid.csv")).string(),
                                     channel.sfg.entries);
        const model::SparseGrid grid{2.0 / channel.config.M,
                                     channel.config.tau_max_s / channel.config.K};
        io::write_complex_matrix_csv(
            (out / (stem + "_delay_wavenumber.csv")).string(),
            model::sparse_domain_synthesis(channel.config, channel.paths, grid));

        summary[static_cast<std::size_t>(i)] = {
            spec.name,
            io::CsvWriter::cell(job.trial),
            io::CsvWriter::cell(channel.seed),
            io::CsvWriter::cell(job.n_paths),
            io::CsvWriter::cell(job.aperture),
            io::CsvWriter::cell(channel.sfg.entries.norm()),
            io::CsvWriter::cell(channel.sfg.entries.cwiseAbs().maxCoeff()),
        };
    });

    io::CsvWriter csv((out / "synth.csv").string(),
                      {"experiment", "trial", "seed", "L", "aperture_wavelengths",
                       "grid_frobenius", "grid_peak_abs"});
    for (const Row& row : summary)
        csv.row(row);
    std::cout << "synth: wrote " << jobs.size() << " channel realizations to " << out.string()
              << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// estimate

namespace
{

struct EstimateJob
{
    int n_paths;
    double snr_db;
    int n_antennas;
    int n_pilots;
    double aperture;
    int trial;
};

Rows estimate_rows(const ExperimentSpec& spec, const EstimateJob& job,
                   const std::vector<std::string>& method_names)
{
    const ChannelDraw channel = draw_channel(spec, job.aperture, job.n_paths, job.trial);
    const SystemConfig& config = channel.config;

    const op::SamplingPlan plan = op::SamplingPlan::random(
        config, job.n_antennas, job.n_pilots,
        derive_seed(spec.seed, {tag_plan, static_cast<std::uint64_t>(job.trial),
                                static_cast<std::uint64_t>(job.n_antennas),
                                static_cast<std::uint64_t>(job.n_pilots)}));
    const double sigma = op::sigma_for_snr_db(channel.sfg, plan, job.snr_db);
    const op::Observation obs = op::observe(
        channel.sfg, plan, sigma,
        derive_seed(spec.seed,
                    {tag_noise, static_cast<std::uint64_t>(job.trial),
                     static_cast<std::uint64_t>(job.n_paths), bits_of(job.snr_db),
                     static_cast<std::uint64_t>(job.n_antennas),
                     static_cast<std::uint64_t>(job.n_pilots), bits_of(job.aperture)}));

    const op::MeasurementOperator meas(config, plan);
    const leakage::LeakageParams leak =
        leakage::derive_leakage_params(config, sigma * sigma, spec.gamma_override);
    const double eps = residual_threshold(meas.range_dim(), sigma);
    const CVector truth = channel.sfg.entries.reshaped();

    Rows rows;
    for (const std::string& name : method_names)
    {
        const RecoveryMethod method = parse_recovery_method(name);
        const auto t0 = Clock::now();
        recovery::RecoverySolution sol;
        switch (method)
        {
        case RecoveryMethod::dcgomp:
            sol = recovery::dc_gomp(meas, obs.y0, leak.gamma, eps, spec.max_iterations);
            break;
        case RecoveryMethod::omp:
            sol = recovery::omp(meas, obs.y0, eps, spec.max_iterations);
            break;
        case RecoveryMethod::gomp:
        {
            const recovery::GroupPartition partition = recovery::GroupPartition::for_gamma(
                config.M, config.K, leak.gamma, leak.gamma_k / leak.gamma_tau);
            sol = recovery::gomp_uniform(meas, obs.y0, eps, spec.max_iterations, partition);
            break;
        }
        case RecoveryMethod::ls:
            sol = recovery::ls_baseline(meas, obs.y0);
            break;
        }
        const double wall = elapsed_s(t0);
        sol.relative_error = recovery::relative_error(sol.g_hat, truth);

        rows.push_back({spec.name,
                        io::CsvWriter::cell(job.trial),
                        io::CsvWriter::cell(channel.seed),
                        name,
                        io::CsvWriter::cell(job.n_paths),
                        io::CsvWriter::cell(job.snr_db),
                        io::CsvWriter::cell(job.n_antennas),
                        io::CsvWriter::cell(job.n_pilots),
                        io::CsvWriter::cell(job.aperture),
                        io::CsvWriter::cell(leak.gamma),
                        io::CsvWriter::cell(sol.relative_error),
                        io::CsvWriter::cell(sol.state.iterations),
                        io::CsvWriter::cell(sol.state.residual_history.back()),
                        io::CsvWriter::cell(wall)});
    }
    return rows;
}

const std::vector<std::string> estimate_header = {
    "experiment", "trial",     "seed",           "method",
    "L",          "snr_db",    "n_antennas",     "n_pilots",
    "aperture_wavelengths",    "gamma",          "relative_error",
    "iterations", "residual_norm", "wall_time_s"};

int estimate_into(const ExperimentSpec& spec, const RunOptions& options,
                  const std::string& csv_name)
{
    std::vector<std::string> methods = spec.methods;
    if (methods.empty())
        methods = {"dcgomp", "omp", "gomp", "ls"};
    for (const std::string& m : methods)
        parse_recovery_method(m); // fail fast on typos

    std::vector<EstimateJob> jobs;
    for (int L : spec.path_counts)
        for (double snr : spec.snr_db)
            for (int n_r : spec.n_antennas)
                for (int n_p : spec.n_pilots)
                    for (double aperture : spec.aperture_wavelengths)
                        for (int trial = 0; trial < spec.trials; ++trial)
                            jobs.push_back({L, snr, n_r, n_p, aperture, trial});

    std::vector<Rows> results(jobs.size());
    run_jobs(options.workers, static_cast<int>(jobs.size()), [&](int i) {
        results[static_cast<std::size_t>(i)] =
            estimate_rows(spec, jobs[static_cast<std::size_t>(i)], methods);
    });

    const fs::path out(spec.output_dir);
    fs::create_directories(out);
    io::CsvWriter csv((out / csv_name).string(), estimate_header);
    std::map<std::string, std::pair<double, int>> means;
    for (const Rows& rows : results)
        for (const Row& row : rows)
        {
            csv.row(row);
            auto& acc = means[row[3]];
            acc.first += std::stod(row[10]);
            acc.second += 1;
        }
    std::cout << "estimate: " << jobs.size() << " jobs -> " << (out / csv_name).string() << "\n";
    for (const auto& [method, acc] : means)
        std::cout << "  mean relative error [" << method << "] = " << acc.first / acc.second
                  << "\n";
    return 0;
}

} // namespace

int run_estimate(const ExperimentSpec& raw, const RunOptions& options)
{
    return estimate_into(resolve(raw, options), options, "estimate.csv");
}

// ---------------------------------------------------------------------------
// equalize

namespace
{

const std::vector<std::string> equalize_header = {
    "experiment", "trial",       "seed",           "method",   "aperture_wavelengths",
    "n_antennas", "objective",   "mean_gain",      "min_gain_db_vs_equal",
    "mean_gain_db_vs_equal",     "certificate",    "nodes_explored",
    "wall_time_s", "n_selected"};

Rows equalize_rows(const ExperimentSpec& spec, double aperture, int n_antennas, int trial,
                   const std::vector<SelectionMethod>& methods)
{
    const ChannelDraw channel = draw_channel(spec, aperture, spec.path_counts.front(), trial);
    const eq::EqualizationProblem problem =
        eq::EqualizationProblem::from_grid(channel.sfg.entries, n_antennas);

    const std::vector<int> equal_rows = eq::equal_spaced(channel.config.M, n_antennas);
    const RVector equal_gains = eq::combined_gains(channel.sfg.entries, equal_rows);
    const double equal_min = equal_gains.minCoeff();
    const double equal_mean = equal_gains.mean();

    Rows rows;
    for (std::size_t m = 0; m < methods.size(); ++m)
    {
        const eq::EqualizationSolution sol =
            run_selection(spec, methods[m], problem, trial, m);
        const RVector gains = eq::combined_gains(channel.sfg.entries, sol.selected);
        rows.push_back({spec.name,
                        io::CsvWriter::cell(trial),
                        io::CsvWriter::cell(channel.seed),
                        methods[m].label,
                        io::CsvWriter::cell(aperture),
                        io::CsvWriter::cell(n_antennas),
                        io::CsvWriter::cell(sol.objective),
                        io::CsvWriter::cell(gains.mean()),
                        io::CsvWriter::cell(db_ratio(sol.objective, equal_min)),
                        io::CsvWriter::cell(db_ratio(gains.mean(), equal_mean)),
                        eq::to_string(sol.certificate),
                        io::CsvWriter::cell(sol.nodes_explored),
                        io::CsvWriter::cell(sol.wall_time_s),
                        io::CsvWriter::cell(static_cast<int>(sol.selected.size()))});
    }
    return rows;
}

int equalize_into(const ExperimentSpec& spec, const RunOptions& options,
                  const std::string& detail_name, const std::string& timing_name,
                  const std::vector<std::pair<double, int>>& aperture_antennas)
{
    std::vector<std::string> names = spec.methods;
    if (names.empty())
        names = {"bb", "grsip", "random:" + std::to_string(spec.random_draws), "equal"};
    std::vector<SelectionMethod> methods;
    for (const std::string& n : names)
        methods.push_back(parse_selection_method(n));

    struct Job
    {
        double aperture;
        int n_antennas;
        int trial;
    };
    std::vector<Job> jobs;
    for (const auto& [aperture, n_r] : aperture_antennas)
        for (int trial = 0; trial < spec.trials; ++trial)
            jobs.push_back({aperture, n_r, trial});

    std::vector<Rows> results(jobs.size());
    run_jobs(options.workers, static_cast<int>(jobs.size()), [&](int i) {
        const Job& job = jobs[static_cast<std::size_t>(i)];
        results[static_cast<std::size_t>(i)] =
            equalize_rows(spec, job.aperture, job.n_antennas, job.trial, methods);
    });

    const fs::path out(spec.output_dir);
    fs::create_directories(out);
    io::CsvWriter csv((out / detail_name).string(), equalize_header);
    std::map<std::string, std::pair<double, double>> stats; // time sum, objective sum
    std::map<std::string, int> counts;
    for (const Rows& rows : results)
        for (const Row& row : rows)
        {
            csv.row(row);
            stats[row[3]].first += std::stod(row[12]);
            stats[row[3]].second += std::stod(row[6]);
            counts[row[3]] += 1;
        }

    io::CsvWriter timing((out / timing_name).string(),
                         {"method", "avg_time_s", "avg_objective", "trials"});
    for (const std::string& n : names) // preserve the requested method order
    {
        const auto& acc = stats[n];
        const int c = counts[n];
        timing.row({n, io::CsvWriter::cell(acc.first / c), io::CsvWriter::cell(acc.second / c),
                    io::CsvWriter::cell(c)});
    }
    std::cout << "equalize: " << jobs.size() << " channels -> " << (out / detail_name).string()
              << "\n";
    for (const std::string& n : names)
        std::cout << "  avg time [" << n << "] = " << stats[n].first / counts[n] << " s\n";
    return 0;
}

} // namespace

int run_equalize(const ExperimentSpec& raw, const RunOptions& options)
{
    const ExperimentSpec spec = resolve(raw, options);
    std::vector<std::pair<double, int>> pairs;
    for (double aperture : spec.aperture_wavelengths)
        for (int n_r : spec.n_antennas)
            pairs.emplace_back(aperture, n_r);
    return equalize_into(spec, options, "equalize.csv", "timing.csv", pairs);
}

// ---------------------------------------------------------------------------
// ber

namespace
{

const std::vector<std::string> ber_header = {"snr_db",     "ber",   "method", "aperture_wavelengths",
                                             "seed",       "experiment", "trial"};

int ber_into(const ExperimentSpec& spec, const RunOptions& options,
             const std::vector<std::pair<double, int>>& aperture_antennas,
             const std::string& csv_name)
{
    std::vector<std::string> names = spec.methods;
    if (names.empty())
        names = {"bb", "grsip", "equal"};
    std::vector<SelectionMethod> methods;
    for (const std::string& n : names)
        methods.push_back(parse_selection_method(n));

    struct Job
    {
        double aperture;
        int n_antennas;
        int trial;
    };
    std::vector<Job> jobs;
    for (const auto& [aperture, n_r] : aperture_antennas)
        for (int trial = 0; trial < spec.trials; ++trial)
            jobs.push_back({aperture, n_r, trial});

    std::vector<Rows> results(jobs.size());
    run_jobs(options.workers, static_cast<int>(jobs.size()), [&](int i) {
        const Job& job = jobs[static_cast<std::size_t>(i)];
        const ChannelDraw channel =
            draw_channel(spec, job.aperture, spec.path_counts.front(), job.trial);
        const eq::EqualizationProblem problem =
            eq::EqualizationProblem::from_grid(channel.sfg.entries, job.n_antennas);

        link::LinkConfig link_config;
        link_config.snr_db_grid = spec.ber_snr_db;
        link_config.symbols_per_point = spec.symbols_per_point;
        link_config.reference_gain =
            link::snr_reference_gain(channel.sfg.entries, job.n_antennas);

        Rows rows;
        for (std::size_t m = 0; m < methods.size(); ++m)
        {
            const eq::EqualizationSolution sol =
                run_selection(spec, methods[m], problem, job.trial, m);
            const std::vector<double> ber = link::ber_monte_carlo(
                channel.sfg.entries, sol.selected, link_config,
                derive_seed(spec.seed, {tag_ber, static_cast<std::uint64_t>(job.trial),
                                        static_cast<std::uint64_t>(m)}));
            for (std::size_t p = 0; p < ber.size(); ++p)
                rows.push_back({io::CsvWriter::cell(spec.ber_snr_db[p]),
                                io::CsvWriter::cell(ber[p]), methods[m].label,
                                io::CsvWriter::cell(job.aperture),
                                io::CsvWriter::cell(channel.seed), spec.name,
                                io::CsvWriter::cell(job.trial)});
        }
        results[static_cast<std::size_t>(i)] = std::move(rows);
    });

    const fs::path out(spec.output_dir);
    fs::create_directories(out);
    io::CsvWriter csv((out / csv_name).string(), ber_header);
    for (const Rows& rows : results)
        for (const Row& row : rows)
            csv.row(row);
    std::cout << "ber: " << jobs.size() << " channels x " << names.size() << " methods -> "
              << (out / csv_name).string() << "\n";
    return 0;
}

} // namespace

int run_ber(const ExperimentSpec& raw, const RunOptions& options)
{
    const ExperimentSpec spec = resolve(raw, options);
    std::vector<std::pair<double, int>> pairs;
    for (double aperture : spec.aperture_wavelengths)
        pairs.emplace_back(aperture, spec.n_antennas.front());
    return ber_into(spec, options, pairs, "ber.csv");
}

// ---------------------------------------------------------------------------
// sweep recipes

int run_sweep(const ExperimentSpec& raw, const RunOptions& options, int figure)
{
    ExperimentSpec spec = resolve(raw, options);
    switch (figure)
    {
    case 3:
        // Relative error against SNR, all recovery methods.
        spec.snr_db = {0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0};
        spec.methods = {"dcgomp", "omp", "gomp", "ls"};
        return estimate_into(spec, options, "sweep_fig3.csv");
    case 5:
        // Relative error against the number of observed antennas.
        spec.n_antennas = {8, 12, 16, 20, 24};
        spec.snr_db = {spec.snr_db.front()};
        spec.methods = {"dcgomp", "omp", "gomp", "ls"};
        return estimate_into(spec, options, "sweep_fig5.csv");
    case 7:
    {
        // Worst-subcarrier gain of optimized vs baseline selections across
        // apertures, antenna count tied to the aperture (two per wavelength).
        spec.methods = {"bb", "grsip", "random:" + std::to_string(spec.random_draws), "equal"};
        std::vector<std::pair<double, int>> pairs;
        for (double aperture : {6.0, 8.0, 10.0})
            pairs.emplace_back(aperture, static_cast<int>(std::lround(2.0 * aperture)));
        return equalize_into(spec, options, "sweep_fig7.csv", "sweep_fig7_timing.csv", pairs);
    }
    case 8:
        // BER curves for the selection strategies at the widest aperture.
        spec.methods = {"bb", "grsip", "equal"};
        return ber_into(spec, options, {{spec.aperture_wavelengths.back(),
                                         spec.n_antennas.front()}},
                        "sweep_fig8.csv");
    default:
        throw std::invalid_argument("run_sweep: supported figures are 3, 5, 7 and 8");
    }
}

// ---------------------------------------------------------------------------
// diagnose

int run_diagnose(const ExperimentSpec& raw, const RunOptions& options)
{
    const ExperimentSpec spec = resolve(raw, options);
    const int L = spec.path_counts.front();
    const ChannelDraw channel = draw_channel(spec, spec.aperture_wavelengths.front(), L, 0);
    const SystemConfig& config = channel.config;

    const op::SamplingPlan plan = op::SamplingPlan::random(
        config, spec.n_antennas.front(), spec.n_pilots.front(),
        derive_seed(spec.seed, {tag_plan, 0, static_cast<std::uint64_t>(spec.n_antennas.front()),
                                static_cast<std::uint64_t>(spec.n_pilots.front())}));
    const double sigma = op::sigma_for_snr_db(channel.sfg, plan, spec.snr_db.front());
    const leakage::LeakageParams leak =
        leakage::derive_leakage_params(config, sigma * sigma, spec.gamma_override);

    const op::MeasurementOperator meas(config, plan);
    const auto frame = meas.frame_bounds_estimate();
    const recovery::CoherenceReport coherence = recovery::coherence_report(
        meas, leak.gamma, L, nullptr, 2048, derive_seed(spec.seed, {tag_coherence}));

    io::json report{{"system", io::to_json(config)},
                    {"noise_sigma", sigma},
                    {"leakage", io::to_json(leak)},
                    {"frame_bounds", {frame.first, frame.second}},
                    {"coherence",
                     {{"mu", coherence.mu},
                      {"mu_group", coherence.mu_group},
                      {"nu", coherence.nu},
                      {"columns_analyzed", coherence.columns_analyzed},
                      {"subset_used", coherence.subset_used},
                      {"omp_condition_ok", coherence.omp_condition_ok},
                      {"group_condition_ok", coherence.group_condition_ok}}}};

    std::cout << "diagnose: M=" << config.M << " K=" << config.K << " aperture "
              << config.aperture_wavelengths << " wavelengths\n";
    std::cout << "  leakage: gamma_tau=" << leak.gamma_tau << " gamma_k=" << leak.gamma_k
              << " gamma=" << leak.gamma << " threshold=" << leak.threshold << "\n";
    std::cout << "  frame bounds of D D^H: [" << frame.first << ", " << frame.second << "]\n";
    std::cout << "  coherence: mu=" << coherence.mu << " mu_group=" << coherence.mu_group
              << " nu=" << coherence.nu << (coherence.subset_used ? " (column subset)" : "")
              << "\n";
    std::cout << "  sufficient conditions at L=" << L
              << ": omp=" << (coherence.omp_condition_ok ? "ok" : "violated")
              << " group=" << (coherence.group_condition_ok ? "ok" : "violated") << "\n";

    // Reconstruction-bound constants for the configured sparsity, evaluated
    // at illustrative isometry constants (measuring the true ones is a
    // combinatorial problem); the split parameter minimizes C0.
    const int k = leak.gamma * L;
    const int P = plan.n_antennas() * plan.n_pilots();
    io::json bounds = io::json::array();
    for (double delta : {0.1, 0.2, 0.3})
    {
        io::json entry{{"delta_kP", delta}, {"delta_P", delta}, {"k", k}, {"P", P}};
        if (k >= P)
        {
            entry["feasible"] = false;
            entry["reason"] = "sparsity not below the measurement count";
        }
        else
        {
            try
            {
                const double rho = static_cast<double>(k) / P;
                const double c = recovery::minimize_c0_split(delta, delta, rho);
                recovery::ErrorBoundParams params{delta, delta, k, P, c};
                const recovery::ErrorBoundConstants constants =
                    recovery::error_bound_constants(params);
                entry["feasible"] = true;
                entry["c"] = c;
                entry["C0"] = constants.C0;
                entry["C1"] = constants.C1;
                std::cout << "  bound constants at delta=" << delta << ": C0=" << constants.C0
                          << " (c=" << c << ")\n";
            }
            catch (const std::invalid_argument& e)
            {
                entry["feasible"] = false;
                entry["reason"] = e.what();
                std::cout << "  bound constants at delta=" << delta << ": infeasible ("
                          << e.what() << ")\n";
            }
        }
        bounds.push_back(entry);
    }
    report["bound_constants"] = bounds;

    const fs::path out(spec.output_dir);
    fs::create_directories(out);
    std::ofstream file(out / "diagnose.json");
    file << report.dump(2) << '\n';
    std::cout << "diagnose: wrote " << (out / "diagnose.json").string() << "\n";
    return 0;
}

} // namespace faslab::exp
