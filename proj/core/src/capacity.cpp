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
#include "irs/capacity.hpp"

#include <cmath>
#include <stdexcept>

namespace irs
{
    namespace
    {
        double time_share(int slots, const SystemConfig &c)
        {
            if (c.tau <= 0)
                throw std::invalid_argument("capacity: coherence block length must be positive");
            return static_cast<double>(slots) / c.tau;
        }

        double p2_form(const Eigen::VectorXcd &h, const SystemConfig &c, double noise_over_power)
        {
            const double kappa = combined_distortion(c);
            double x = 0.0;
            for (Eigen::Index m = 0; m < h.size(); ++m)
            {
                const double a = std::norm(h[m]);
                x += a / (kappa * a + noise_over_power);
            }
            return x / (1.0 + c.kappa_u * x);
        }
    }

    double downlink_quadratic_form(const Eigen::VectorXcd &h_hat, const SystemConfig &c)
    {
        if (!(c.p_b > 0.0 && c.sigma2_u > 0.0))
            throw std::invalid_argument("downlink capacity needs positive p_b and sigma2_u");
        return p2_form(h_hat, c, c.sigma2_u / c.p_b);
    }

    double uplink_quadratic_form(const Eigen::VectorXcd &h_hat, const SystemConfig &c)
    {
        if (!(c.p_u > 0.0 && c.sigma2_b > 0.0))
            throw std::invalid_argument("uplink capacity needs positive p_u and sigma2_b");
        return p2_form(h_hat, c, c.sigma2_b / c.p_u);
    }

    double capacity_downlink_upper(const Eigen::VectorXcd &h_hat, const SystemConfig &c)
    {
        return time_share(c.tau_d, c) * std::log2(1.0 + downlink_quadratic_form(h_hat, c));
    }

    double capacity_uplink_upper(const Eigen::VectorXcd &h_hat, const SystemConfig &c)
    {
        return time_share(c.tau_u, c) * std::log2(1.0 + uplink_quadratic_form(h_hat, c));
    }

    BoundPair asymptotic_bounds_power(const SystemConfig &c)
    {
        if (c.kappa_b == 0.0 && c.kappa_u == 0.0)
            throw std::domain_error("asymptotic_bounds_power: capacity is unbounded without hardware distortion");
        const double share = time_share(c.tau_d, c);
        const double M = c.M;
        return {share * std::log2(1.0 + 1.0 / (c.kappa_b + c.kappa_u * (1.0 + c.kappa_b))),
                share * std::log2(1.0 + M / (c.kappa_b + c.kappa_u * (M + c.kappa_b)))};
    }

    BoundPair asymptotic_bounds_dimension(const SystemConfig &c)
    {
        if (c.kappa_u == 0.0)
            throw std::domain_error("asymptotic_bounds_dimension: upper bound is unbounded when kappa_u = 0");
        const double share = time_share(c.tau_d, c);
        return {share * std::log2(1.0 + 1.0 / (c.kappa_b + c.kappa_u * (1.0 + c.kappa_b))),
                share * std::log2(1.0 + 1.0 / c.kappa_u)};
    }

    Eigen::VectorXd choose_phases(const ChannelRealization &real, const SystemConfig &config, PhasePolicy policy,
                                  const GdmOptions &gdm)
    {
        if (policy == PhasePolicy::zero || real.N() == 0)
            return Eigen::VectorXd::Zero(real.N());
        return gdm_optimize(real, config, gdm).theta_opt;
    }

    CapacityReport ergodic_capacity_mc(const SystemConfig &config, PhasePolicy policy, std::size_t trials,
                                       const RandomStream &rng, const McOptions &mc, const GdmOptions &gdm,
                                       ChannelMode mode)
    {
        if (trials < 1)
            throw std::invalid_argument("ergodic_capacity_mc: trials must be >= 1");
        config.validate();

        auto body = [&](std::size_t, RandomStream &r, double *out)
        {
            const ChannelRealization real = sample_channels(config, r, mode);
            const PhaseState ph = make_phase_state(choose_phases(real, config, policy, gdm));
            const Eigen::VectorXcd h = overall_channel(real, ph);
            out[0] = capacity_uplink_upper(h, config);
            out[1] = capacity_downlink_upper(h, config);
        };
        const auto stats = run_trials(trials, 2, rng, body, mc);

        CapacityReport rep;
        rep.trials = trials;
        rep.c_uplink = stats[0].mean;
        rep.c_uplink_se = stats[0].std_error();
        rep.c_downlink = stats[1].mean;
        rep.c_downlink_se = stats[1].std_error();
        if (config.kappa_b > 0.0 || config.kappa_u > 0.0)
            rep.bounds_power = asymptotic_bounds_power(config);
        if (config.kappa_u > 0.0)
            rep.bounds_dimension = asymptotic_bounds_dimension(config);
        return rep;
    }
}
