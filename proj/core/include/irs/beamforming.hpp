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
#ifndef IRS_BEAMFORMING_HPP
#define IRS_BEAMFORMING_HPP

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "irs/config.hpp"
#include "irs/system_model.hpp"

namespace irs
{
    // Interference-plus-noise matrices seen by the uplink combiner (U) and the downlink beamformer (D).
    // D_tilde is D without the user-side rank-one distortion term.
    struct NoiseShapingMatrices
    {
        Eigen::MatrixXcd U;
        Eigen::MatrixXcd D;
        Eigen::MatrixXcd D_tilde;
    };

    struct Beamformers
    {
        Eigen::VectorXcd w_rx; // uplink combiner
        Eigen::VectorXcd w_tx; // downlink beamformer
    };

    struct GdmOptions
    {
        double tolerance = 1e-8;    // stop when the relative objective gain of a step drops below this
        int max_iters = 500;
        double initial_step = 1.0;
        double armijo_slope = 0.3;
        double shrink = 0.5;
        int max_backtracks = 60;
    };

    struct BeamformingSolution
    {
        Eigen::VectorXcd w_tx;
        Eigen::VectorXcd w_rx;
        Eigen::VectorXd theta_opt;
        std::vector<std::pair<int, double>> objective_trace; // (iteration, objective)
        int iterations = 0;
        bool converged = false; // false when max_iters ran out
        double snr_downlink = 0.0;
    };

    // Combined BS distortion weight on diag(h h^H): (1 + kappa_u) kappa_b
    double combined_distortion(const SystemConfig &config);

    NoiseShapingMatrices noise_shaping_matrices(const Eigen::VectorXcd &h_hat, const SystemConfig &config);

    Beamformers optimal_beamformers(const Eigen::VectorXcd &h_hat, const NoiseShapingMatrices &mats);

    // |w^H h|^2 / (w^H D w) for the downlink, and with U for the uplink
    double snr_downlink(const Eigen::VectorXcd &w, const Eigen::VectorXcd &h_hat, const SystemConfig &config);
    double snr_uplink(const Eigen::VectorXcd &w, const Eigen::VectorXcd &h_hat, const SystemConfig &config);

    // Reflect-phase objective sum_i |u_i|^2 / (kappa |u_i|^2 + sigma_u^2 / p_b), u = h_d + H_R exp(j theta)
    double objective_p4(const Eigen::VectorXd &theta, const ChannelRealization &real, const SystemConfig &config);
    Eigen::VectorXd gradient_p4(const Eigen::VectorXd &theta, const ChannelRealization &real,
                                const SystemConfig &config);

    // Aligns every reflected path with the strongest direct entry
    Eigen::VectorXd initial_phases(const ChannelRealization &real);

    // Gradient ascent with backtracking line search, started from initial_phases()
    BeamformingSolution gdm_optimize(const ChannelRealization &real, const SystemConfig &config,
                                     const GdmOptions &opts = {});
    BeamformingSolution gdm_optimize(const ChannelRealization &real, const SystemConfig &config,
                                     const Eigen::VectorXd &theta0, const GdmOptions &opts);
}

#endif
