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
//
// Command line entry point. Subcommands drive the batch experiment runners;
// all data lands in CSV/JSON files under the output directory, stdout carries
// a short human summary, and every failure prints one machine-readable JSON
// object to stderr before the nonzero exit.

#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "faslab/experiment.hpp"
#include "faslab/serialize.hpp"

namespace
{

void print_error(const std::string& kind, const std::string& message)
{
    std::cerr << faslab::io::json{{"error", message}, {"kind", kind}}.dump() << "\n";
}

faslab::exp::ExperimentSpec load_spec(const std::string& path)
{
    if (path.empty())
        return faslab::exp::ExperimentSpec{};
    std::ifstream file(path);
    if (!file)
        throw std::invalid_argument("cannot open spec file '" + path + "'");
    faslab::io::json j;
    file >> j;
    return faslab::exp::spec_from_json(j);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"faslab - wideband fluid-antenna receiver laboratory"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string spec_path;
    std::uint64_t seed = 0;
    int workers = 1;
    std::string out_dir;
    bool paper_scale = false;
    int figure = 0;

    app.add_option("--spec", spec_path, "Experiment spec JSON file (defaults built in)")
        ->envname("FASLAB_SPEC");
    CLI::Option* seed_opt =
        app.add_option("--seed", seed, "Master seed override")->envname("FASLAB_SEED");
    app.add_option("--workers", workers, "Worker threads for trial-level parallelism")
        ->envname("FASLAB_WORKERS")
        ->check(CLI::PositiveNumber);
    CLI::Option* out_opt =
        app.add_option("--out", out_dir, "Output directory override")->envname("FASLAB_OUT");
    app.add_flag("--paper-scale", paper_scale, "Restore the full 128x128 grid")
        ->envname("FASLAB_PAPER_SCALE");

    CLI::App* synth = app.add_subcommand("synth", "Synthesize channel realizations");
    CLI::App* estimate = app.add_subcommand("estimate", "Recover channels from observations");
    CLI::App* equalize = app.add_subcommand("equalize", "Optimize antenna selections");
    CLI::App* ber = app.add_subcommand("ber", "Monte-Carlo BER curves per selection method");
    CLI::App* sweep = app.add_subcommand("sweep", "Figure-style sweep recipes");
    CLI::App* diagnose = app.add_subcommand("diagnose", "Leakage, coherence and bound diagnostics");
    sweep->add_option("--fig", figure, "Recipe number (3, 5, 7 or 8)")->required();

    std::vector<std::string> methods;
    for (CLI::App* sub : {estimate, equalize, ber})
        sub->add_option("--method", methods, "Override the method list (repeatable)");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp& e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError& e)
    {
        print_error("usage", e.what());
        return e.get_exit_code() != 0 ? e.get_exit_code() : 1;
    }

    faslab::exp::ExperimentSpec spec;
    faslab::exp::RunOptions options;
    try
    {
        spec = load_spec(spec_path);
        if (!methods.empty())
            spec.methods = methods;
        if (seed_opt->count() > 0)
            options.seed = seed;
        if (out_opt->count() > 0)
            options.out_dir = out_dir;
        options.workers = workers;
        options.paper_scale = paper_scale;
    }
    catch (const std::exception& e)
    {
        print_error("config", e.what());
        return 2;
    }

    try
    {
        if (synth->parsed())
            return faslab::exp::run_synth(spec, options);
        if (estimate->parsed())
            return faslab::exp::run_estimate(spec, options);
        if (equalize->parsed())
            return faslab::exp::run_equalize(spec, options);
        if (ber->parsed())
            return faslab::exp::run_ber(spec, options);
        if (sweep->parsed())
            return faslab::exp::run_sweep(spec, options, figure);
        if (diagnose->parsed())
            return faslab::exp::run_diagnose(spec, options);
    }
    catch (const std::invalid_argument& e)
    {
        print_error("config", e.what());
        return 2;
    }
    catch (const std::exception& e)
    {
        print_error("runtime", e.what());
        return 3;
    }
    print_error("usage", "no subcommand selected");
    return 1;
}
