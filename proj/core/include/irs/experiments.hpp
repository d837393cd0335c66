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
#ifndef IRS_EXPERIMENTS_HPP
#define IRS_EXPERIMENTS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "irs/beamforming.hpp"
#include "irs/config.hpp"
#include "irs/power_energy.hpp"
#include "irs/result_table.hpp"
#include "irs/system_model.hpp"

namespace irs
{
    enum class ExperimentName
    {
        fig2_direct_mse,
        fig3_cascade_mse,
        fig4_pilot_length,
        fig5_floor_vs_N,
        fig6_se_vs_N,
        fig7_se_vs_snr,
        fig8_se_vs_M,
        fig9_convergence,
        fig10_power_scaling,
        fig11_ee_vs_M
    };

    struct CatalogEntry
    {
        ExperimentName name;
        std::string id;
        std::string sweep_variable;
        std::string series_variable; // empty when the experiment has no series axis
        std::string description;
    };

    const std::vector<CatalogEntry> &experiment_catalog();
    const CatalogEntry &catalog_entry(ExperimentName name);
    std::string to_string(ExperimentName name);
    std::optional<ExperimentName> parse_experiment_name(const std::string &id);

    struct Axis
    {
        std::string variable;
        std::vector<double> values;
    };

    struct ExperimentSpec
    {
        ExperimentName name = ExperimentName::fig2_direct_mse;
        SystemConfig system;
        EnergyConfig energy;
        PowerScalingConfig scaling;
        GdmOptions gdm;
        PhaseNoiseModel phase_noise = PhaseNoiseModel::none();
        ChannelMode channel_mode = ChannelMode::composite;
        Axis sweep;
        Axis series;
        std::uint64_t trials = 1000;
        std::uint64_t seed = 1;
        unsigned workers = 0;          // 0 picks the hardware concurrency; never changes the output
        bool exact_cancellation = true; // fig3: extra series with literal direct-path cancellation

        std::vector<std::string> violations() const;
        void validate() const; // throws ValidationError
    };

    ExperimentSpec default_spec(ExperimentName name);

    // Deterministic in (spec minus workers); metadata.wall_time_s is the only varying field
    ResultTable run_experiment(const ExperimentSpec &spec);

    // JSON ingestion. Keys absent from the document keep the experiment defaults; unknown keys are errors.
    // `name` overrides or supplies the "experiment" key.
    ExperimentSpec parse_spec(const std::string &json_text, std::optional<ExperimentName> name = std::nullopt);
    ExperimentSpec load_spec(const std::string &path, std::optional<ExperimentName> name = std::nullopt);
    // Canonical JSON rendering of every field that affects the output
    std::string spec_to_json(const ExperimentSpec &spec);
    std::string config_hash(const ExperimentSpec &spec);
}

#endif
