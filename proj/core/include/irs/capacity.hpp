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
#ifndef IRS_CAPACITY_HPP
#define IRS_CAPACITY_HPP

#include <cstddef>
#include <optional>

#include <Eigen/Dense>

#include "irs/beamforming.hpp"
#include "irs/config.hpp"
#include "irs/monte_carlo.hpp"
#include "irs/random.hpp"
#include "irs/system_model.hpp"

namespace irs
{
    struct BoundPair
    {
        double lower = 0.0;
        double upper = 0.0;
    };

    enum class PhasePolicy
    {
        zero,
        gdm
    };

    struct CapacityReport
    {
        double c_uplink = 0.0, c_uplink_se = 0.0;
        double c_downlink = 0.0, c_downlink_se = 0.0;
        std::optional<BoundPair> bounds_power;     // absent without any distortion
        std::optional<BoundPair> bounds_dimension; // absent when kappa_u = 0
        std::size_t trials = 0;
    };

    // h^H D^-1 h evaluated as x / (1 + kappa_u x) with x = h^H D_tilde^-1 h
    double downlink_quadratic_form(const Eigen::VectorXcd &h_hat, const SystemConfig &config);
    double uplink_quadratic_form(const Eigen::VectorXcd &h_hat, const SystemConfig &config);

    // (tau_d / tau) log2(1 + h^H D^-1 h)
    double capacity_downlink_upper(const Eigen::VectorXcd &h_hat, const SystemConfig &config);
    // (tau_u / tau) log2(1 + h^H U^-1 h)
    double capacity_uplink_upper(const Eigen::VectorXcd &h_hat, const SystemConfig &config);

    // Limits as p_b grows without bound. Throws std::domain_error when kappa_b = kappa_u = 0.
    BoundPair asymptotic_bounds_power(const SystemConfig &config);
    // Limits as M and N grow without bound. Throws std::domain_error when kappa_u = 0.
    BoundPair asymptotic_bounds_dimension(const SystemConfig &config);

    // Reflect phases for one realization under the given policy (noise-free, as known to the BS)
    Eigen::VectorXd choose_phases(const ChannelRealization &real, const SystemConfig &config, PhasePolicy policy,
                                  const GdmOptions &gdm = {});

    CapacityReport ergodic_capacity_mc(const SystemConfig &config, PhasePolicy policy, std::size_t trials,
                                       const RandomStream &rng, const McOptions &mc = {},
                                       const GdmOptions &gdm = {}, ChannelMode mode = ChannelMode::composite);
}

#endif
