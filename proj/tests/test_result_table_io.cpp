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
#include <catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "irs/experiments.hpp"
#include "irs/result_table.hpp"
#include "support.hpp"

using namespace irs;

namespace
{
    std::size_t count(const std::string &s, const std::string &needle)
    {
        std::size_t n = 0;
        for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1))
            ++n;
        return n;
    }

    ResultTable sample_table()
    {
        ResultTable t;
        t.set_sweep("snr_db", {-10.0, 0.0, 10.0});
        t.add_parameter("n_elements", {4.0, 4.0, 4.0});
        t.add_monte_carlo("mse", {0.1, 1.0 / 3.0, 2e-300}, {0.01, 0.02, 0.03});
        t.add_closed_form("mse_closed", {0.1, 0.3, 1e300});
        t.metadata.experiment = "unit";
        t.metadata.seed = 4;
        t.metadata.trials = 10;
        t.metadata.config_hash = "abc";
        t.metadata.notes = {"note"};
        return t;
    }
}

TEST_CASE("result table structure", "[result_table]")
{
    const auto t = sample_table();
    CHECK(t.rows() == 3);
    CHECK(t.invariant_violations().empty());
    CHECK(t.series_names() == std::vector<std::string>{"mse", "mse_closed"});
    CHECK(t.column("mse_se").kind == ColumnKind::std_error);
    CHECK(t.has_column("n_elements"));
    CHECK_THROWS_AS(t.column("missing"), std::out_of_range);

    ResultTable bad = sample_table();
    CHECK_THROWS_AS(bad.add_closed_form("mse", {1.0, 2.0, 3.0}), std::invalid_argument);
    CHECK_THROWS_AS(bad.add_closed_form("short", {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(bad.add_closed_form("a,b", {1.0, 2.0, 3.0}), std::invalid_argument);
    CHECK_THROWS_AS(bad.add_monte_carlo("m", {1.0, 2.0, 3.0}, {1.0}), std::invalid_argument);
    ResultTable unswept;
    CHECK_THROWS_AS(unswept.add_closed_form("x", {1.0}), std::logic_error);
}

TEST_CASE("CSV output round-trips every digit", "[result_table]")
{
    const auto t = sample_table();
    std::ostringstream os;
    write_csv(t, os);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "snr_db,n_elements,mse,mse_se,mse_closed");
    for (std::size_t r = 0; r < t.rows(); ++r)
    {
        REQUIRE(std::getline(is, line));
        std::istringstream row(line);
        std::string cell;
        for (const auto &c : t.columns())
        {
            REQUIRE(std::getline(row, cell, ','));
            CHECK(std::strtod(cell.c_str(), nullptr) == c.values[r]);
        }
    }
    CHECK_FALSE(std::getline(is, line));

    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(std::nan("")) == "nan");
    CHECK(format_number(-INFINITY) == "-inf");

    ResultTable empty;
    empty.set_sweep("M", {});
    std::ostringstream e;
    write_csv(empty, e);
    CHECK(e.str() == "M\n");
}

TEST_CASE("SVG output draws one line per series", "[result_table]")
{
    const auto t = sample_table();
    std::ostringstream os;
    write_svg(t, os);
    const auto svg = os.str();
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(count(svg, "<polyline") == t.series_names().size());
    CHECK(count(svg, "stroke-dasharray") == 1);
    CHECK(svg.find("mse_closed") != std::string::npos);
    CHECK(svg.find("n_elements") == std::string::npos);
}

TEST_CASE("metadata sidecar and file errors", "[result_table]")
{
    const auto t = sample_table();
    std::ostringstream os;
    write_metadata_json(t, os);
    const auto j = nlohmann::json::parse(os.str());
    CHECK(j.at("experiment") == "unit");
    CHECK(j.at("seed") == 4);
    CHECK(j.at("trials") == 10);
    CHECK(j.at("config_hash") == "abc");
    CHECK(j.at("notes").size() == 1);

    const auto dir = std::filesystem::temp_directory_path() / "irs_result_table_test";
    std::filesystem::create_directories(dir);
    const auto csv = (dir / "t.csv").string();
    emit(t, EmitFormat::csv, csv);
    emit(t, EmitFormat::svg, (dir / "t.svg").string());
    emit_metadata(t, csv + ".meta.json");
    CHECK(std::filesystem::file_size(csv) > 0);
    CHECK(std::filesystem::exists(csv + ".meta.json"));
    CHECK_THROWS_AS(emit(t, EmitFormat::csv, (dir / "missing" / "t.csv").string()), IoError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("experiment specs load from JSON", "[experiment_io]")
{
    const auto spec = parse_spec(R"({
        "experiment": "fig7_se_vs_snr",
        "seed": 11,
        "trials": 32,
        "system": {"M": 4, "N": 8, "kappa": 0.01},
        "sweep": {"variable": "snr_db", "values": [0, 10]},
        "gdm": {"max_iters": 50}
    })");
    CHECK(spec.name == ExperimentName::fig7_se_vs_snr);
    CHECK(spec.seed == 11);
    CHECK(spec.trials == 32);
    CHECK(spec.system.M == 4);
    CHECK(spec.system.kappa_b == 0.01);
    CHECK(spec.system.kappa_u == 0.01);
    CHECK(spec.sweep.values == std::vector<double>{0.0, 10.0});
    CHECK(spec.gdm.max_iters == 50);
    CHECK(spec.gdm.armijo_slope == default_spec(ExperimentName::fig7_se_vs_snr).gdm.armijo_slope);

    CHECK_THROWS_AS(parse_spec(R"({"experiment": "fig7_se_vs_snr", "sytem": {}})"), ValidationError);
    CHECK_THROWS_AS(parse_spec(R"({"experiment": "fig7_se_vs_snr", "system": {"MM": 3}})"), ValidationError);
    CHECK_THROWS_AS(parse_spec(R"({"experiment": "fig99"})"), ValidationError);
    CHECK_THROWS_AS(parse_spec("{not json"), ValidationError);
    CHECK_THROWS_AS(parse_spec(R"({"seed": 3})"), ValidationError);
    CHECK(parse_spec(R"({"seed": 3})", ExperimentName::fig2_direct_mse).seed == 3);
    CHECK_THROWS_AS(load_spec("/nonexistent/spec.json"), IoError);
}

TEST_CASE("experiment specs round-trip and hash stably", "[experiment_io]")
{
    for (const auto &entry : experiment_catalog())
    {
        const auto spec = default_spec(entry.name);
        const auto text = spec_to_json(spec);
        const auto back = parse_spec(text);
        CHECK(spec_to_json(back) == text);
        CHECK(config_hash(back) == config_hash(spec));
        CHECK(config_hash(spec).size() == 16);

        auto workers = spec;
        workers.workers = spec.workers + 3;
        CHECK(config_hash(workers) == config_hash(spec));
        auto reseeded = spec;
        reseeded.seed = spec.seed + 1;
        CHECK(config_hash(reseeded) != config_hash(spec));

        CHECK(to_string(entry.name) == entry.id);
        CHECK(parse_experiment_name(entry.id) == entry.name);
    }
    CHECK_FALSE(parse_experiment_name("fig1"));
}
