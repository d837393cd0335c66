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
#ifndef IRS_POWER_ENERGY_HPP
#define IRS_POWER_ENERGY_HPP

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "irs/config.hpp"
#include "irs/monte_carlo.hpp"
#include "irs/random.hpp"
#include "irs/system_model.hpp"

namespace irs
{
    enum class CsiMode
    {
        perfect,
        imperfect
    };

    // Uplink power scaling p_u = E_u / f(M, N).
    // k is the cascade-to-direct gain ratio; with per-entry variances it equals beta_r / beta_d.
    struct PowerScalingConfig
    {
        double E_u = 1.0;
        double k = 1.0;
        CsiMode csi_mode = CsiMode::perfect;
        std::optional<double> alpha; // imperfect family exponent in (0, 1/2]

        std::vector<std::string> violations() const;
        void validate() const;
    };

    struct EnergyConfig
    {
        double rho = 0.0;    // per-antenna circuit energy per channel use
        double zeta = 0.5e-6; // static circuit energy per channel use
        int tau_pilot = 0;

        std::vector<std::string> violations(const SystemConfig &config) const;
        void validate(const SystemConfig &config) const;
    };

    struct AveragePower
    {
        double downlink = 0.0;
        double uplink = 0.0;
    };

    struct EeBounds
    {
        double lower = 0.0;
        double upper = 0.0;
        double finite_M_upper = 0.0;
    };

    // k under the per-entry variance binding
    double cascade_ratio(const SystemConfig &config);

    double scaled_power(const PowerScalingConfig &ps, int M, int N);
    // E_u / (M^alpha (1 + k N^2)^(2 alpha)) for any alpha > 0, including over-aggressive exponents
    double scaled_power_exponent(double E_u, double k, double alpha, int M, int N);

    // Aggregate per-entry gain (1 + k N^2) beta_d seen by the imperfect-CSI model
    double imperfect_channel_gain(double k, int N, double beta_d);
    double imperfect_estimate_variance(double p_u, double beta);
    double imperfect_error_variance(double p_u, double beta);
    Eigen::VectorXcd sample_imperfect_estimate(int M, double p_u, double beta, RandomStream &rng);

    // MRC rate with a perfectly known channel h
    double rate_uplink_perfect(const Eigen::VectorXcd &h, double p_u, const SystemConfig &config);
    // Same, with h built from the realization and the intended (noise-free) phases
    double rate_uplink_perfect(const ChannelRealization &real, const PhaseState &phases, double p_u,
                               const SystemConfig &config);
    // MRC rate on an estimated channel with per-entry error variance est_var
    double rate_uplink_imperfect(const Eigen::VectorXcd &h_est, double est_var, double p_u,
                                 const SystemConfig &config);

    double rate_limit(const PowerScalingConfig &ps, const SystemConfig &config);

    // Energy spent per coherence block, circuit terms included
    double block_energy(const EnergyConfig &e, const SystemConfig &config);
    AveragePower average_power(const EnergyConfig &e, const SystemConfig &config);
    double energy_efficiency_downlink(double C_d, const EnergyConfig &e, const SystemConfig &config);
    EeBounds ee_bounds(const EnergyConfig &e, const SystemConfig &config);

    struct RateEstimate
    {
        double mean = 0.0;
        double std_error = 0.0;
        double p_u = 0.0; // transmit power used
    };

    // Mean uplink rate at (M, N) with p_u from the scaling law. Perfect CSI draws the actual channel
    // (zero reflect phases); imperfect CSI draws the estimate from its stated marginal.
    // `exponent` replaces the imperfect-family exponent without the (0, 1/2] restriction.
    RateEstimate scaled_rate_mc(const PowerScalingConfig &ps, const SystemConfig &config, int M, int N,
                                std::size_t trials, const RandomStream &rng, const McOptions &mc = {},
                                std::optional<double> exponent = std::nullopt);
}

#endif
