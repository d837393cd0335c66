// SPDX-License-Identifier: Apache-2.0
//
// irs-sim: hardware-impaired IRS-assisted MISO link simulation library
// Copyright (C) 2025 The irs-sim contributors
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
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "irs/experiments.hpp"

namespace
{
    enum Exit
    {
        ok = 0,
        usage = 1,
        invalid = 2,
        io = 3,
        failure = 4
    };

    void report(const irs::ValidationError &e)
    {
        std::cerr << "invalid configuration:\n";
        for (const auto &v : e.violations())
            std::cerr << "  - " << v << '\n';
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Monte Carlo simulator for surface-assisted multi-antenna links with hardware impairments"};
    app.require_subcommand(1);

    auto *run = app.add_subcommand("run", "Run one experiment and write its CSV");
    std::string experiment, config_path, out_path;
    std::optional<std::uint64_t> seed, trials;
    std::optional<unsigned> workers;
    std::string plot_path;
    run->add_option("--experiment,-e", experiment, "Experiment id (see `list`)");
    run->add_option("--config,-c", config_path, "JSON configuration");
    run->add_option("--seed", seed, "Root seed (overrides the config)");
    run->add_option("--trials", trials, "Monte Carlo trials per point (overrides the config)");
    run->add_option("--workers", workers, "Worker threads, 0 for all cores; never changes the output");
    run->add_option("--out,-o", out_path, "Output CSV path")->required();
    run->add_option("--plot", plot_path, "Also write an SVG plot to this path");

    auto *validate = app.add_subcommand("validate", "Check a configuration without running it");
    std::string validate_path, validate_experiment;
    validate->add_option("--config,-c", validate_path, "JSON configuration")->required();
    validate->add_option("--experiment,-e", validate_experiment, "Experiment id if the config omits it");

    auto *list = app.add_subcommand("list", "List the available experiments");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? ok : usage;
    }

    auto lookup = [](const std::string &id) -> std::optional<irs::ExperimentName>
    {
        if (id.empty())
            return std::nullopt;
        auto n = irs::parse_experiment_name(id);
        if (!n)
            throw irs::ValidationError({"unknown experiment '" + id + "' (see `irs-sim list`)"});
        return n;
    };

    try
    {
        if (*list)
        {
            for (const auto &e : irs::experiment_catalog())
            {
                std::cout << e.id << "\n    sweep: " << e.sweep_variable;
                if (!e.series_variable.empty())
                    std::cout << ", series: " << e.series_variable;
                std::cout << "\n    " << e.description << '\n';
            }
            return ok;
        }

        if (*validate)
        {
            const auto spec = irs::load_spec(validate_path, lookup(validate_experiment));
            std::cout << "ok: " << irs::to_string(spec.name) << " (" << irs::config_hash(spec) << ")\n";
            return ok;
        }

        const auto name = lookup(experiment);
        irs::ExperimentSpec spec;
        if (!config_path.empty())
            spec = irs::load_spec(config_path, name);
        else if (name)
            spec = irs::default_spec(*name);
        else
        {
            std::cerr << "run: give --experiment, --config, or both\n";
            return usage;
        }
        if (seed)
            spec.seed = *seed;
        if (trials)
            spec.trials = *trials;
        if (workers)
            spec.workers = *workers;
        spec.validate();

        const auto table = irs::run_experiment(spec);
        irs::emit(table, irs::EmitFormat::csv, out_path);
        const std::string meta = out_path + ".meta.json";
        irs::emit_metadata(table, meta);
        if (!plot_path.empty())
            irs::emit(table, irs::EmitFormat::svg, plot_path);
        std::cerr << irs::to_string(spec.name) << ": " << table.rows() << " rows -> " << out_path << " ("
                  << table.metadata.wall_time_s << " s)\n";
        return ok;
    }
    catch (const irs::ValidationError &e)
    {
        report(e);
        return invalid;
    }
    catch (const irs::IoError &e)
    {
        std::cerr << "i/o error: " << e.what() << '\n';
        return io;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return failure;
    }
}
