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
#include "irs/system_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace irs
{
    using cd = std::complex<double>;
    constexpr double pi = std::numbers::pi;

    double PhaseNoiseModel::circular_mean() const
    {
        switch (kind)
        {
        case Kind::none:
            return 1.0;
        case Kind::uniform:
            return half_width == 0.0 ? 1.0 : std::sin(half_width) / half_width;
        case Kind::von_mises:
            if (concentration == 0.0)
                return 0.0;
            if (concentration > 500.0) // asymptotic ratio, the Bessel values overflow
                return 1.0 - 0.5 / concentration - 0.125 / (concentration * concentration);
            return std::cyl_bessel_i(1.0, concentration) / std::cyl_bessel_i(0.0, concentration);
        }
        return 1.0;
    }

    double evm_of(double kappa)
    {
        if (!(kappa >= 0.0))
            throw std::domain_error("evm_of: kappa must be non-negative");
        return std::sqrt(kappa);
    }

    ChannelRealization make_realization(Eigen::VectorXcd h_d, Eigen::MatrixXcd G, Eigen::VectorXcd h_r)
    {
        if (G.rows() != h_d.size() || G.cols() != h_r.size())
            throw std::invalid_argument("make_realization: dimension mismatch");
        ChannelRealization r;
        r.h_d = std::move(h_d);
        r.G = std::move(G);
        r.h_r = std::move(h_r);
        r.H_R = r.G * r.h_r.asDiagonal();
        r.h_c = r.H_R.rowwise().sum();
        return r;
    }

    ChannelRealization sample_channels(const SystemConfig &config, RandomStream &rng, ChannelMode mode)
    {
        const Eigen::Index M = config.M, N = config.N;
        if (M < 1 || N < 0)
            throw std::invalid_argument("sample_channels: invalid dimensions");

        Eigen::VectorXcd h_d = rng.complex_normal_vector(M, config.beta_d);
        if (mode == ChannelMode::composite)
        {
            Eigen::MatrixXcd G = rng.complex_normal_matrix(M, N, config.beta_g());
            Eigen::VectorXcd h_r = rng.complex_normal_vector(N, config.beta_h());
            return make_realization(std::move(h_d), std::move(G), std::move(h_r));
        }

        ChannelRealization r;
        r.h_d = std::move(h_d);
        r.G.resize(M, 0);
        r.h_r.resize(0);
        r.H_R = rng.complex_normal_matrix(M, N, config.beta_r);
        r.h_c = N > 0 ? Eigen::VectorXcd(r.H_R.rowwise().sum()) : Eigen::VectorXcd::Zero(M);
        return r;
    }

    namespace
    {
        // Best & Fisher rejection sampler, zero mean direction
        double draw_von_mises(double kappa, RandomStream &rng)
        {
            if (kappa < 1e-8)
                return rng.uniform(-pi, pi);
            const double tau = 1.0 + std::sqrt(1.0 + 4.0 * kappa * kappa);
            const double rho = (tau - std::sqrt(2.0 * tau)) / (2.0 * kappa);
            const double r = (1.0 + rho * rho) / (2.0 * rho);
            while (true)
            {
                double u1 = rng.uniform(), u2 = rng.uniform(), u3 = rng.uniform();
                double z = std::cos(pi * u1);
                double f = (1.0 + r * z) / (r + z);
                double c = kappa * (r - f);
                if (c * (2.0 - c) - u2 > 0.0 || std::log(c / u2) + 1.0 - c >= 0.0)
                {
                    double t = std::acos(std::clamp(f, -1.0, 1.0));
                    return u3 > 0.5 ? t : -t;
                }
            }
        }
    }

    Eigen::VectorXd sample_phase_noise(Eigen::Index N, const PhaseNoiseModel &model, RandomStream &rng)
    {
        Eigen::VectorXd d = Eigen::VectorXd::Zero(N);
        switch (model.kind)
        {
        case PhaseNoiseModel::Kind::none:
            break;
        case PhaseNoiseModel::Kind::uniform:
            if (!(model.half_width >= 0.0) || model.half_width > pi)
                throw std::domain_error("sample_phase_noise: half width must lie in [0, pi]");
            for (Eigen::Index n = 0; n < N; ++n)
                d[n] = rng.uniform(-model.half_width, model.half_width);
            break;
        case PhaseNoiseModel::Kind::von_mises:
            if (!(model.concentration >= 0.0))
                throw std::domain_error("sample_phase_noise: concentration must be non-negative");
            for (Eigen::Index n = 0; n < N; ++n)
                d[n] = draw_von_mises(model.concentration, rng);
            break;
        }
        return d;
    }

    PhaseState make_phase_state(const Eigen::VectorXd &theta, const Eigen::VectorXd &delta_theta,
                                const PhaseNoiseModel &model)
    {
        if (theta.size() != delta_theta.size())
            throw std::invalid_argument("make_phase_state: dimension mismatch");
        PhaseState s;
        s.noise_model = model;
        s.theta.resize(theta.size());
        s.v.resize(theta.size());
        s.delta_theta = delta_theta;
        for (Eigen::Index n = 0; n < theta.size(); ++n)
        {
            double t = std::fmod(theta[n], 2.0 * pi);
            if (t < 0.0)
                t += 2.0 * pi;
            if (t >= 2.0 * pi)
                t = 0.0;
            s.theta[n] = t;
            s.v[n] = std::polar(1.0, theta[n] + delta_theta[n]);
        }
        return s;
    }

    PhaseState make_phase_state(const Eigen::VectorXd &theta)
    {
        return make_phase_state(theta, Eigen::VectorXd::Zero(theta.size()));
    }

    Eigen::VectorXcd overall_channel(const ChannelRealization &real, const PhaseState &phases)
    {
        if (phases.v.size() != real.N())
            throw std::invalid_argument("overall_channel: phase vector length differs from N");
        if (real.N() == 0)
            return real.h_d;
        return real.h_d + real.H_R * phases.v;
    }

    Eigen::VectorXcd overall_channel_composite(const ChannelRealization &real, const PhaseState &phases)
    {
        if (real.G.cols() != phases.v.size() || real.h_r.size() != phases.v.size())
            throw std::invalid_argument("overall_channel_composite: composite factors unavailable");
        if (phases.v.size() == 0)
            return real.h_d;
        return real.h_d + real.G * (phases.v.asDiagonal() * real.h_r);
    }

    Eigen::MatrixXcd uplink_distortion_covariance(const Eigen::VectorXcd &h, const SystemConfig &config)
    {
        const double v_u = config.kappa_u * config.p_u;
        Eigen::VectorXd d = h.cwiseAbs2() * (config.kappa_b * (config.p_u + v_u));
        return d.cast<cd>().asDiagonal();
    }

    Eigen::VectorXcd simulate_uplink_rx(cd x, const ChannelRealization &real, const PhaseState &phases,
                                        const SystemConfig &config, RandomStream &rng, ImpairmentDraw *draw)
    {
        const Eigen::VectorXcd h = overall_channel(real, phases);
        const Eigen::Index M = h.size();
        const double px = std::norm(x);
        const double v_u = config.kappa_u * px;
        const double scale_b = config.kappa_b * (px + v_u);

        cd eta_u = v_u > 0.0 ? rng.complex_normal(v_u) : cd{0.0, 0.0};
        Eigen::VectorXcd eta_b(M), n(M);
        for (Eigen::Index m = 0; m < M; ++m)
        {
            double var = scale_b * std::norm(h[m]);
            eta_b[m] = var > 0.0 ? rng.complex_normal(var) : cd{0.0, 0.0};
        }
        for (Eigen::Index m = 0; m < M; ++m)
            n[m] = config.sigma2_b > 0.0 ? rng.complex_normal(config.sigma2_b) : cd{0.0, 0.0};

        if (draw)
        {
            draw->eta_u = eta_u;
            draw->eta_b = eta_b;
            draw->awgn = n;
            draw->v_u = v_u;
            draw->Upsilon_B = (h.cwiseAbs2() * scale_b).cast<cd>().asDiagonal();
        }
        return h * (x + eta_u) + eta_b + n;
    }

    cd simulate_downlink_rx(const Eigen::VectorXcd &x, const ChannelRealization &real, const PhaseState &phases,
                            const SystemConfig &config, RandomStream &rng, ImpairmentDraw *draw)
    {
        const Eigen::VectorXcd h = overall_channel(real, phases);
        if (x.size() != h.size())
            throw std::invalid_argument("simulate_downlink_rx: x length differs from M");
        const Eigen::Index M = h.size();

        Eigen::VectorXd ups = x.cwiseAbs2() * config.kappa_b;
        Eigen::VectorXcd eta_b(M);
        for (Eigen::Index m = 0; m < M; ++m)
            eta_b[m] = ups[m] > 0.0 ? rng.complex_normal(ups[m]) : cd{0.0, 0.0};

        const double signal = std::norm(h.dot(x)); // dot conjugates the first argument
        const double v_u = config.kappa_u * (signal + h.cwiseAbs2().dot(ups));
        cd eta_u = v_u > 0.0 ? rng.complex_normal(v_u) : cd{0.0, 0.0};
        cd n = config.sigma2_u > 0.0 ? rng.complex_normal(config.sigma2_u) : cd{0.0, 0.0};

        if (draw)
        {
            draw->eta_u = eta_u;
            draw->eta_b = eta_b;
            draw->awgn = Eigen::VectorXcd::Constant(1, n);
            draw->v_u = v_u;
            draw->Upsilon_B = ups.cast<cd>().asDiagonal();
        }
        return h.dot(x + eta_b) + eta_u + n;
    }
}
