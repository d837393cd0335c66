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
#ifndef IRS_SYSTEM_MODEL_HPP
#define IRS_SYSTEM_MODEL_HPP

#include <complex>

#include <Eigen/Dense>

#include "irs/config.hpp"
#include "irs/random.hpp"

namespace irs
{
    // One draw of the propagation channels
    struct ChannelRealization
    {
        Eigen::VectorXcd h_d; // [M] direct BS-user channel
        Eigen::MatrixXcd G;   // [M x N] BS-surface channel (empty in direct_cascade mode)
        Eigen::VectorXcd h_r; // [N] surface-user channel (empty in direct_cascade mode)
        Eigen::MatrixXcd H_R; // [M x N] cascade, column n = G column n times h_r[n]
        Eigen::VectorXcd h_c; // [M] cascade response at zero phase, H_R * 1

        Eigen::Index M() const { return h_d.size(); }
        Eigen::Index N() const { return H_R.cols(); }
    };

    enum class ChannelMode
    {
        composite,     // draw G and h_r, build H_R = G diag(h_r)
        direct_cascade // draw H_R columns directly, i.i.d. CN(0, beta_r)
    };

    struct PhaseNoiseModel
    {
        enum class Kind
        {
            none,
            uniform,  // uniform on [-half_width, half_width]
            von_mises // von Mises with mean zero and the given concentration
        };
        Kind kind = Kind::uniform;
        double half_width = 3.14159265358979323846 / 6.0;
        double concentration = 0.0;

        static PhaseNoiseModel none() { return {Kind::none, 0.0, 0.0}; }
        static PhaseNoiseModel uniform(double half_width) { return {Kind::uniform, half_width, 0.0}; }
        static PhaseNoiseModel von_mises(double concentration) { return {Kind::von_mises, 0.0, concentration}; }

        // E[exp(j dtheta)], real by symmetry
        double circular_mean() const;
    };

    struct PhaseState
    {
        Eigen::VectorXd theta;       // intended phases in [0, 2pi)
        Eigen::VectorXd delta_theta; // phase-noise draw in [-pi, pi]
        Eigen::VectorXcd v;          // exp(j (theta + delta_theta))
        PhaseNoiseModel noise_model = PhaseNoiseModel::none();
    };

    // Distortion and thermal noise terms behind one received sample
    struct ImpairmentDraw
    {
        std::complex<double> eta_u{0.0, 0.0};
        Eigen::VectorXcd eta_b;
        Eigen::VectorXcd awgn; // [M] uplink, [1] downlink
        double v_u = 0.0;
        Eigen::MatrixXcd Upsilon_B;
    };

    double evm_of(double kappa);

    ChannelRealization sample_channels(const SystemConfig &config, RandomStream &rng,
                                       ChannelMode mode = ChannelMode::composite);

    // Builds H_R and h_c from G and h_r
    ChannelRealization make_realization(Eigen::VectorXcd h_d, Eigen::MatrixXcd G, Eigen::VectorXcd h_r);

    Eigen::VectorXd sample_phase_noise(Eigen::Index N, const PhaseNoiseModel &model, RandomStream &rng);

    // Wraps theta into [0, 2pi) and builds v from theta + delta_theta
    PhaseState make_phase_state(const Eigen::VectorXd &theta, const Eigen::VectorXd &delta_theta,
                                const PhaseNoiseModel &model = PhaseNoiseModel::none());
    PhaseState make_phase_state(const Eigen::VectorXd &theta);

    // h_d + H_R v
    Eigen::VectorXcd overall_channel(const ChannelRealization &real, const PhaseState &phases);
    // h_d + G diag(v) h_r, the composite-form evaluation (requires G and h_r)
    Eigen::VectorXcd overall_channel_composite(const ChannelRealization &real, const PhaseState &phases);

    // BS distortion covariance for an uplink sample: kappa_b (p_u + v_u) diag(h h^H)
    Eigen::MatrixXcd uplink_distortion_covariance(const Eigen::VectorXcd &h, const SystemConfig &config);

    // Uplink sample y = h (x + eta_u) + eta_b + n. The impairment terms are reported through `draw` when given.
    Eigen::VectorXcd simulate_uplink_rx(std::complex<double> x, const ChannelRealization &real,
                                        const PhaseState &phases, const SystemConfig &config, RandomStream &rng,
                                        ImpairmentDraw *draw = nullptr);

    // Downlink sample y = h^H (x + eta_b) + eta_u + n
    std::complex<double> simulate_downlink_rx(const Eigen::VectorXcd &x, const ChannelRealization &real,
                                              const PhaseState &phases, const SystemConfig &config,
                                              RandomStream &rng, ImpairmentDraw *draw = nullptr);
}

#endif
