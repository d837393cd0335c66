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
#ifndef IRS_RANDOM_HPP
#define IRS_RANDOM_HPP

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace irs
{
    // Deterministic random stream keyed by (seed, stream tag, index).
    // Distinct keys give independent substreams, so a trial's draws never depend on
    // which worker runs it or in which order trials are executed.
    class RandomStream
    {
    public:
        using result_type = std::uint64_t;

        explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0, std::uint64_t index = 0);

        // Child stream for a sub-task, e.g. one Monte Carlo trial
        RandomStream substream(std::uint64_t index) const;

        static constexpr result_type min() { return std::mt19937_64::min(); }
        static constexpr result_type max() { return std::mt19937_64::max(); }
        result_type operator()() { return engine_(); }

        double uniform(double lo = 0.0, double hi = 1.0);
        double normal();
        // Circular complex Gaussian with E|z|^2 = var
        std::complex<double> complex_normal(double var = 1.0);
        Eigen::VectorXcd complex_normal_vector(Eigen::Index n, double var = 1.0);
        Eigen::MatrixXcd complex_normal_matrix(Eigen::Index rows, Eigen::Index cols, double var = 1.0);

        std::uint64_t seed() const { return seed_; }
        std::uint64_t stream() const { return stream_; }
        std::uint64_t index() const { return index_; }

    private:
        std::uint64_t seed_, stream_, index_;
        std::mt19937_64 engine_;
        std::normal_distribution<double> normal_{0.0, 1.0};
        std::uniform_real_distribution<double> uniform_{0.0, 1.0};
    };

    // Fixed stream tags so that different experiment stages never share draws
    namespace stream_tag
    {
        inline constexpr std::uint64_t channel = 0x11;
        inline constexpr std::uint64_t phase_noise = 0x12;
        inline constexpr std::uint64_t impairment = 0x13;
        inline constexpr std::uint64_t estimation = 0x21;
        inline constexpr std::uint64_t capacity = 0x31;
        inline constexpr std::uint64_t power_scaling = 0x41;
        inline constexpr std::uint64_t energy = 0x51;
        inline constexpr std::uint64_t test = 0x7f;
    }
}

#endif
