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

#ifndef IRS_CONFIG_HPP
#define IRS_CONFIG_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace irs
{
    // Thrown when a configuration breaks one or more invariants. what() lists all of them.
    class ValidationError : public std::invalid_argument
    {
    public:
        explicit ValidationError(std::vector<std::string> violations);
        const std::vector<std::string> &violations() const noexcept { return violations_; }

    private:
        std::vector<std::string> violations_;
    };

    // Thrown when a linear system is too badly conditioned to solve reliably
    class NumericalError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Link parameters shared by all modules.
    // M  : base station antennas
    // N  : reflecting elements
    // K  : single-antenna users
    // beta_d, beta_r : large-scale gains of the direct and BS-surface-user paths
    // kappa_b, kappa_u : error-vector-magnitude squared of the BS and user radios
    // p_u, p_b : user and BS transmit power
    // sigma2_b, sigma2_u : receiver noise power at the BS and the user
    // tau : coherence block length in symbols; tau1..tau3 are the three pilot phases,
    //       tau_u / tau_d the uplink and downlink data slots
    struct SystemConfig
    {
        int M = 10;
        int N = 25;
        int K = 1;
        double beta_d = 1.0;
        double beta_r = 1.0;
        double kappa_b = 1e-4;
        double kappa_u = 1e-4;
        double p_u = 1.0;
        double p_b = 1.0;
        double sigma2_b = 1.0;
        double sigma2_u = 1.0;
        int tau = 200;
        int tau1 = 10;
        int tau2 = 32;
        int tau3 = 0;
        int tau_u = 79;
        int tau_d = 79;

        // Reflect and forward link gain of the composite path, split evenly
        double beta_g() const;
        double beta_h() const;

        std::vector<std::string> violations() const;
        void validate() const; // throws ValidationError
    };

    // Converts a dB value to linear scale
    double db_to_linear(double db);
    double linear_to_db(double lin);
}

#endif
