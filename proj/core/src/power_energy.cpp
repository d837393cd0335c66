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
#include "irs/power_energy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace irs
{
    std::vector<std::string> PowerScalingConfig::violations() const
    {
        std::vector<std::string> v;
        if (!(E_u > 0.0) || !std::isfinite(E_u))
            v.emplace_back("E_u must be > 0");
        if (!(k > 0.0) || !std::isfinite(k))
            v.emplace_back("k must be > 0");
        if (alpha && !(*alpha > 0.0 && *alpha <= 0.5))
            v.emplace_back("alpha must lie in (0, 1/2]");
        return v;
    }

    void PowerScalingConfig::validate() const
    {
        auto v = violations();
        if (!v.empty())
            throw ValidationError(std::move(v));
    }

    std::vector<std::string> EnergyConfig::violations(const SystemConfig &c) const
    {
        std::vector<std::string> v;
        if (!(rho >= 0.0) || !std::isfinite(rho))
            v.emplace_back("rho must be >= 0");
        if (!(zeta >= 0.0) || !std::isfinite(zeta))
            v.emplace_back("zeta must be >= 0");
        if (!(rho + zeta > 0.0))
            v.emplace_back("rho + zeta must be > 0");
        if (tau_pilot < 0)
            v.emplace_back("tau_pilot must be >= 0");
        if (static_cast<long long>(tau_pilot) + c.tau_u + c.tau_d > c.tau)
            v.emplace_back("tau_pilot + tau_u + tau_d must not exceed tau");
        return v;
    }

    void EnergyConfig::validate(const SystemConfig &c) const
    {
        auto v = violations(c);
        if (!v.empty())
            throw ValidationError(std::move(v));
    }

    double cascade_ratio(const SystemConfig &c)
    {
        return c.beta_r / c.beta_d;
    }

    double scaled_power(const PowerScalingConfig &ps, int M, int N)
    {
        ps.validate();
        if (M < 1 || N < 0)
            throw std::invalid_argument("scaled_power: need M >= 1 and N >= 0");
        const double n2 = static_cast<double>(N) * N;
        if (ps.csi_mode == CsiMode::perfect)
            return ps.E_u / (M + ps.k * M * n2);
        if (ps.alpha)
            return scaled_power_exponent(ps.E_u, ps.k, *ps.alpha, M, N);
        return ps.E_u / (std::sqrt(static_cast<double>(M)) * (1.0 + ps.k * n2));
    }

    double scaled_power_exponent(double E_u, double k, double alpha, int M, int N)
    {
        if (!(alpha > 0.0) || M < 1 || N < 0)
            throw std::invalid_argument("scaled_power_exponent: need alpha > 0, M >= 1, N >= 0");
        const double n2 = static_cast<double>(N) * N;
        return E_u / (std::pow(static_cast<double>(M), alpha) * std::pow(1.0 + k * n2, 2.0 * alpha));
    }

    double imperfect_channel_gain(double k, int N, double beta_d)
    {
        return (1.0 + k * static_cast<double>(N) * N) * beta_d;
    }

    double imperfect_estimate_variance(double p_u, double beta)
    {
        return p_u * beta * beta / (p_u * beta + 1.0);
    }

    double imperfect_error_variance(double p_u, double beta)
    {
        return beta / (p_u * beta + 1.0);
    }

    Eigen::VectorXcd sample_imperfect_estimate(int M, double p_u, double beta, RandomStream &rng)
    {
        return rng.complex_normal_vector(M, imperfect_estimate_variance(p_u, beta));
    }

    double rate_uplink_perfect(const Eigen::VectorXcd &h, double p_u, const SystemConfig &c)
    {
        const double g = h.squaredNorm();
        if (g == 0.0)
            return 0.0;
        const double sinr = p_u * g / (c.kappa_u * p_u * g + c.sigma2_b + p_u * c.kappa_b * (1.0 + c.kappa_u));
        return std::log2(1.0 + sinr);
    }

    double rate_uplink_perfect(const ChannelRealization &real, const PhaseState &phases, double p_u,
                               const SystemConfig &config)
    {
        return rate_uplink_perfect(overall_channel(real, make_phase_state(phases.theta)), p_u, config);
    }

    double rate_uplink_imperfect(const Eigen::VectorXcd &h_est, double est_var, double p_u, const SystemConfig &c)
    {
        const double g = h_est.squaredNorm();
        if (g == 0.0)
            return 0.0;
        const double den = (1.0 + c.kappa_u) * p_u * est_var + c.kappa_u * p_u * g + c.sigma2_b +
                           p_u * c.kappa_b * (1.0 + c.kappa_u);
        return std::log2(1.0 + p_u * g / den);
    }

    double rate_limit(const PowerScalingConfig &ps, const SystemConfig &c)
    {
        ps.validate();
        // beta_d stands for the per-entry direct gain in both limits
        const double s = ps.csi_mode == CsiMode::perfect ? ps.E_u * c.beta_d : ps.E_u * ps.E_u * c.beta_d * c.beta_d;
        return std::log2(1.0 + s / (c.kappa_u * s + c.sigma2_b));
    }

    double block_energy(const EnergyConfig &e, const SystemConfig &c)
    {
        return c.tau_d * c.p_b + (e.tau_pilot + c.tau_u) * c.p_u + c.tau * (c.M * e.rho + e.zeta);
    }

    AveragePower average_power(const EnergyConfig &e, const SystemConfig &c)
    {
        e.validate(c);
        const double data = static_cast<double>(c.tau_u + c.tau_d);
        if (data <= 0.0)
            throw std::invalid_argument("average_power: needs at least one data slot");
        const double shared = e.tau_pilot * c.p_u / c.tau + c.M * e.rho + e.zeta;
        AveragePower a;
        a.downlink = (c.tau_d / data) * shared + c.tau_d * c.p_b / c.tau;
        a.uplink = (c.tau_u / data) * shared + c.tau_u * c.p_u / c.tau;
        return a;
    }

    double energy_efficiency_downlink(double C_d, const EnergyConfig &e, const SystemConfig &c)
    {
        const double den = average_power(e, c).downlink;
        if (!(den > 0.0))
            throw std::domain_error("energy_efficiency_downlink: downlink power must be positive");
        return C_d / den;
    }

    EeBounds ee_bounds(const EnergyConfig &e, const SystemConfig &c)
    {
        if (!(e.zeta > 0.0))
            throw std::invalid_argument("ee_bounds: zeta must be positive");
        const double data = static_cast<double>(c.tau_u + c.tau_d);
        if (data <= 0.0)
            throw std::invalid_argument("ee_bounds: needs at least one data slot");
        const double den = c.tau * e.zeta / data;
        const double inf = std::numeric_limits<double>::infinity();
        const double kb = c.kappa_b, ku = c.kappa_u, M = c.M;

        auto ratio = [&](double num, double d) { return d > 0.0 ? std::log2(1.0 + num / d) / den : inf; };
        EeBounds b;
        b.lower = ratio(1.0, kb + ku * (1.0 + kb));
        b.upper = ratio(1.0, ku);
        b.finite_M_upper = ratio(M, kb + ku * (M + kb));
        return b;
    }

    RateEstimate scaled_rate_mc(const PowerScalingConfig &ps, const SystemConfig &config, int M, int N,
                                std::size_t trials, const RandomStream &rng, const McOptions &mc,
                                std::optional<double> exponent)
    {
        ps.validate();
        if (trials < 1)
            throw std::invalid_argument("scaled_rate_mc: trials must be >= 1");
        SystemConfig c = config;
        c.M = M;
        c.N = N;

        if (exponent && ps.csi_mode == CsiMode::perfect)
            throw std::invalid_argument("scaled_rate_mc: the exponent family applies to imperfect CSI only");
        RateEstimate out;
        if (exponent)
            out.p_u = scaled_power_exponent(ps.E_u, ps.k, *exponent, M, N);
        else
            out.p_u = scaled_power(ps, M, N);
        const double p = out.p_u;

        TrialFn body;
        if (ps.csi_mode == CsiMode::perfect)
            body = [&](std::size_t, RandomStream &r, double *o)
            {
                const ChannelRealization real = sample_channels(c, r);
                o[0] = rate_uplink_perfect(real, make_phase_state(Eigen::VectorXd::Zero(N)), p, c);
            };
        else
        {
            const double beta = imperfect_channel_gain(ps.k, N, c.beta_d);
            const double ev = imperfect_error_variance(p, beta);
            body = [&, beta, ev](std::size_t, RandomStream &r, double *o)
            { o[0] = rate_uplink_imperfect(sample_imperfect_estimate(M, p, beta, r), ev, p, c); };
        }
        const auto st = run_trials(trials, 1, rng, body, mc);
        out.mean = st[0].mean;
        out.std_error = st[0].std_error();
        return out;
    }
}
