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
#include <cstdio>
#include <fstream>
#include <sstream>
#include <limits>
#include <string_view>
#include <type_traits>

#include <json.hpp>

#include "irs/experiments.hpp"

namespace irs
{
    using json = nlohmann::json;
    using ojson = nlohmann::ordered_json;

    namespace
    {
        struct Reader
        {
            std::vector<std::string> errors;

            void unknown_keys(const json &obj, const std::string &where, std::initializer_list<std::string_view> known)
            {
                for (auto it = obj.begin(); it != obj.end(); ++it)
                {
                    bool ok = false;
                    for (auto k : known)
                        ok = ok || it.key() == k;
                    if (!ok)
                        errors.push_back(where + ": unknown key '" + it.key() + "'");
                }
            }

            bool object(const json &j, const std::string &where)
            {
                if (j.is_object())
                    return true;
                errors.push_back(where + ": expected an object");
                return false;
            }

            void number(const json &obj, const char *key, const std::string &where, double &out)
            {
                if (!obj.contains(key))
                    return;
                const auto &v = obj.at(key);
                if (v.is_number())
                    out = v.get<double>();
                else
                    errors.push_back(where + "." + key + ": expected a number");
            }

            template <typename Int>
            void integer(const json &obj, const char *key, const std::string &where, Int &out)
            {
                if (!obj.contains(key))
                    return;
                const auto &v = obj.at(key);
                if (v.is_number_unsigned() || (std::is_signed_v<Int> && v.is_number_integer()))
                {
                    if (v.is_number_unsigned())
                    {
                        const auto u = v.get<std::uint64_t>();
                        if (u > static_cast<std::uint64_t>(std::numeric_limits<Int>::max()))
                        {
                            errors.push_back(where + "." + key + ": out of range");
                            return;
                        }
                        out = static_cast<Int>(u);
                    }
                    else
                    {
                        const auto s = v.get<std::int64_t>();
                        if (s < static_cast<std::int64_t>(std::numeric_limits<Int>::min()) ||
                            s > static_cast<std::int64_t>(std::numeric_limits<Int>::max()))
                        {
                            errors.push_back(where + "." + key + ": out of range");
                            return;
                        }
                        out = static_cast<Int>(s);
                    }
                }
                else
                    errors.push_back(where + "." + key + std::string(std::is_signed_v<Int> ? ": expected an integer"
                                                                                            : ": expected a non-negative integer"));
            }

            void boolean(const json &obj, const char *key, const std::string &where, bool &out)
            {
                if (!obj.contains(key))
                    return;
                const auto &v = obj.at(key);
                if (v.is_boolean())
                    out = v.get<bool>();
                else
                    errors.push_back(where + "." + key + ": expected true or false");
            }

            void string(const json &obj, const char *key, const std::string &where, std::string &out)
            {
                if (!obj.contains(key))
                    return;
                const auto &v = obj.at(key);
                if (v.is_string())
                    out = v.get<std::string>();
                else
                    errors.push_back(where + "." + key + ": expected a string");
            }

            void axis(const json &obj, const char *key, Axis &out)
            {
                if (!obj.contains(key))
                    return;
                const auto &a = obj.at(key);
                const std::string where = key;
                if (!object(a, where))
                    return;
                unknown_keys(a, where, {"variable", "values"});
                string(a, "variable", where, out.variable);
                if (a.contains("values"))
                {
                    const auto &v = a.at("values");
                    if (!v.is_array())
                    {
                        errors.push_back(where + ".values: expected an array of numbers");
                        return;
                    }
                    std::vector<double> vals;
                    for (const auto &x : v)
                    {
                        if (!x.is_number())
                        {
                            errors.push_back(where + ".values: expected an array of numbers");
                            return;
                        }
                        vals.push_back(x.get<double>());
                    }
                    out.values = std::move(vals);
                }
            }
        };

        const char *csi_name(CsiMode m) { return m == CsiMode::perfect ? "perfect" : "imperfect"; }

        const char *noise_name(PhaseNoiseModel::Kind k)
        {
            switch (k)
            {
            case PhaseNoiseModel::Kind::none:
                return "none";
            case PhaseNoiseModel::Kind::uniform:
                return "uniform";
            case PhaseNoiseModel::Kind::von_mises:
                return "von_mises";
            }
            return "none";
        }

        const char *mode_name(ChannelMode m) { return m == ChannelMode::composite ? "composite" : "direct_cascade"; }
    }

    ExperimentSpec parse_spec(const std::string &json_text, std::optional<ExperimentName> name)
    {
        json doc;
        try
        {
            doc = json::parse(json_text);
        }
        catch (const json::parse_error &e)
        {
            throw ValidationError({std::string("config is not valid JSON: ") + e.what()});
        }
        Reader r;
        if (!r.object(doc, "config"))
            throw ValidationError(r.errors);

        r.unknown_keys(doc, "config",
                       {"experiment", "seed", "trials", "workers", "system", "energy", "power_scaling", "gdm",
                        "phase_noise", "channel_mode", "sweep", "series", "exact_cancellation"});

        std::optional<ExperimentName> chosen = name;
        if (!chosen)
        {
            if (!doc.contains("experiment"))
                throw ValidationError({"config: missing 'experiment' and none given"});
            if (!doc.at("experiment").is_string())
                throw ValidationError({"config.experiment: expected a string"});
            const std::string id = doc.at("experiment").get<std::string>();
            chosen = parse_experiment_name(id);
            if (!chosen)
                throw ValidationError({"config.experiment: unknown experiment '" + id + "'"});
        }
        ExperimentSpec s = default_spec(*chosen);

        r.integer(doc, "seed", "config", s.seed);
        r.integer(doc, "trials", "config", s.trials);
        r.integer(doc, "workers", "config", s.workers);
        r.boolean(doc, "exact_cancellation", "config", s.exact_cancellation);

        if (doc.contains("system") && r.object(doc.at("system"), "system"))
        {
            const auto &j = doc.at("system");
            auto &c = s.system;
            r.unknown_keys(j, "system",
                           {"M", "N", "K", "beta_d", "beta_r", "kappa_b", "kappa_u", "kappa", "p_u", "p_b",
                            "sigma2_b", "sigma2_u", "tau", "tau1", "tau2", "tau3", "tau_u", "tau_d"});
            r.integer(j, "M", "system", c.M);
            r.integer(j, "N", "system", c.N);
            r.integer(j, "K", "system", c.K);
            r.number(j, "beta_d", "system", c.beta_d);
            r.number(j, "beta_r", "system", c.beta_r);
            if (j.contains("kappa"))
            {
                double k = c.kappa_b;
                r.number(j, "kappa", "system", k);
                c.kappa_b = c.kappa_u = k;
            }
            r.number(j, "kappa_b", "system", c.kappa_b);
            r.number(j, "kappa_u", "system", c.kappa_u);
            r.number(j, "p_u", "system", c.p_u);
            r.number(j, "p_b", "system", c.p_b);
            r.number(j, "sigma2_b", "system", c.sigma2_b);
            r.number(j, "sigma2_u", "system", c.sigma2_u);
            r.integer(j, "tau", "system", c.tau);
            r.integer(j, "tau1", "system", c.tau1);
            r.integer(j, "tau2", "system", c.tau2);
            r.integer(j, "tau3", "system", c.tau3);
            r.integer(j, "tau_u", "system", c.tau_u);
            r.integer(j, "tau_d", "system", c.tau_d);
        }
        if (doc.contains("energy") && r.object(doc.at("energy"), "energy"))
        {
            const auto &j = doc.at("energy");
            r.unknown_keys(j, "energy", {"rho", "zeta", "tau_pilot"});
            r.number(j, "rho", "energy", s.energy.rho);
            r.number(j, "zeta", "energy", s.energy.zeta);
            r.integer(j, "tau_pilot", "energy", s.energy.tau_pilot);
        }
        if (doc.contains("power_scaling") && r.object(doc.at("power_scaling"), "power_scaling"))
        {
            const auto &j = doc.at("power_scaling");
            r.unknown_keys(j, "power_scaling", {"E_u", "k", "csi_mode", "alpha"});
            r.number(j, "E_u", "power_scaling", s.scaling.E_u);
            r.number(j, "k", "power_scaling", s.scaling.k);
            std::string mode = csi_name(s.scaling.csi_mode);
            r.string(j, "csi_mode", "power_scaling", mode);
            if (mode == "perfect")
                s.scaling.csi_mode = CsiMode::perfect;
            else if (mode == "imperfect")
                s.scaling.csi_mode = CsiMode::imperfect;
            else
                r.errors.push_back("power_scaling.csi_mode: expected 'perfect' or 'imperfect'");
            if (j.contains("alpha"))
            {
                if (j.at("alpha").is_null())
                    s.scaling.alpha.reset();
                else
                {
                    double a = 0.0;
                    r.number(j, "alpha", "power_scaling", a);
                    s.scaling.alpha = a;
                }
            }
        }
        if (doc.contains("gdm") && r.object(doc.at("gdm"), "gdm"))
        {
            const auto &j = doc.at("gdm");
            r.unknown_keys(j, "gdm",
                           {"tolerance", "max_iters", "initial_step", "armijo_slope", "shrink", "max_backtracks"});
            r.number(j, "tolerance", "gdm", s.gdm.tolerance);
            r.integer(j, "max_iters", "gdm", s.gdm.max_iters);
            r.number(j, "initial_step", "gdm", s.gdm.initial_step);
            r.number(j, "armijo_slope", "gdm", s.gdm.armijo_slope);
            r.number(j, "shrink", "gdm", s.gdm.shrink);
            r.integer(j, "max_backtracks", "gdm", s.gdm.max_backtracks);
        }
        if (doc.contains("phase_noise") && r.object(doc.at("phase_noise"), "phase_noise"))
        {
            const auto &j = doc.at("phase_noise");
            r.unknown_keys(j, "phase_noise", {"model", "half_width", "concentration"});
            std::string model = noise_name(s.phase_noise.kind);
            r.string(j, "model", "phase_noise", model);
            if (model == "none")
                s.phase_noise = PhaseNoiseModel::none();
            else if (model == "uniform")
                s.phase_noise = PhaseNoiseModel::uniform(PhaseNoiseModel{}.half_width);
            else if (model == "von_mises")
                s.phase_noise = PhaseNoiseModel::von_mises(0.0);
            else
                r.errors.push_back("phase_noise.model: expected 'none', 'uniform' or 'von_mises'");
            r.number(j, "half_width", "phase_noise", s.phase_noise.half_width);
            r.number(j, "concentration", "phase_noise", s.phase_noise.concentration);
        }
        if (doc.contains("channel_mode"))
        {
            std::string m = mode_name(s.channel_mode);
            r.string(doc, "channel_mode", "config", m);
            if (m == "composite")
                s.channel_mode = ChannelMode::composite;
            else if (m == "direct_cascade")
                s.channel_mode = ChannelMode::direct_cascade;
            else
                r.errors.push_back("config.channel_mode: expected 'composite' or 'direct_cascade'");
        }
        r.axis(doc, "sweep", s.sweep);
        r.axis(doc, "series", s.series);

        if (!r.errors.empty())
            throw ValidationError(r.errors);
        s.validate();
        return s;
    }

    ExperimentSpec load_spec(const std::string &path, std::optional<ExperimentName> name)
    {
        std::ifstream in(path);
        if (!in)
            throw IoError("cannot read config file: " + path);
        std::ostringstream ss;
        ss << in.rdbuf();
        return parse_spec(ss.str(), name);
    }

    std::string spec_to_json(const ExperimentSpec &s)
    {
        const auto &c = s.system;
        ojson j;
        j["experiment"] = to_string(s.name);
        j["seed"] = s.seed;
        j["trials"] = s.trials;
        j["system"] = {{"M", c.M},          {"N", c.N},          {"K", c.K},         {"beta_d", c.beta_d},
                       {"beta_r", c.beta_r}, {"kappa_b", c.kappa_b}, {"kappa_u", c.kappa_u}, {"p_u", c.p_u},
                       {"p_b", c.p_b},      {"sigma2_b", c.sigma2_b}, {"sigma2_u", c.sigma2_u}, {"tau", c.tau},
                       {"tau1", c.tau1},    {"tau2", c.tau2},    {"tau3", c.tau3},   {"tau_u", c.tau_u},
                       {"tau_d", c.tau_d}};
        j["energy"] = {{"rho", s.energy.rho}, {"zeta", s.energy.zeta}, {"tau_pilot", s.energy.tau_pilot}};
        ojson ps = {{"E_u", s.scaling.E_u}, {"k", s.scaling.k}, {"csi_mode", csi_name(s.scaling.csi_mode)}};
        ps["alpha"] = s.scaling.alpha ? ojson(*s.scaling.alpha) : ojson(nullptr);
        j["power_scaling"] = ps;
        j["gdm"] = {{"tolerance", s.gdm.tolerance},       {"max_iters", s.gdm.max_iters},
                    {"initial_step", s.gdm.initial_step}, {"armijo_slope", s.gdm.armijo_slope},
                    {"shrink", s.gdm.shrink},             {"max_backtracks", s.gdm.max_backtracks}};
        j["phase_noise"] = {{"model", noise_name(s.phase_noise.kind)},
                            {"half_width", s.phase_noise.half_width},
                            {"concentration", s.phase_noise.concentration}};
        j["channel_mode"] = mode_name(s.channel_mode);
        j["sweep"] = {{"variable", s.sweep.variable}, {"values", s.sweep.values}};
        j["series"] = {{"variable", s.series.variable}, {"values", s.series.values}};
        j["exact_cancellation"] = s.exact_cancellation;
        return j.dump(2);
    }

    // FNV-1a over the canonical rendering; workers is excluded because it never changes the output
    std::string config_hash(const ExperimentSpec &spec)
    {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (unsigned char ch : spec_to_json(spec))
        {
            h ^= ch;
            h *= 0x100000001b3ull;
        }
        char buf[17];
        std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
        return buf;
    }
}
