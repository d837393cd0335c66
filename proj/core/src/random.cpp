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
#include "irs/random.hpp"

#include <cmath>

namespace irs
{
    namespace
    {
        std::seed_seq make_seed_seq(std::uint64_t seed, std::uint64_t stream, std::uint64_t index)
        {
            auto lo = [](std::uint64_t x) { return static_cast<std::uint32_t>(x & 0xffffffffu); };
            auto hi = [](std::uint64_t x) { return static_cast<std::uint32_t>(x >> 32); };
            return std::seed_seq{lo(seed), hi(seed), lo(stream), hi(stream), lo(index), hi(index), 0x9e3779b9u};
        }
    }

    RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream, std::uint64_t index)
        : seed_(seed), stream_(stream), index_(index)
    {
        auto seq = make_seed_seq(seed, stream, index);
        engine_.seed(seq);
    }

    RandomStream RandomStream::substream(std::uint64_t index) const
    {
        // Mix the parent key into the child's stream word so nested splits stay distinct
        std::uint64_t mixed = stream_ * 0x9e3779b97f4a7c15ull + index_ + 0x632be59bd9b4e019ull;
        return RandomStream(seed_, mixed, index);
    }

    double RandomStream::uniform(double lo, double hi)
    {
        return lo + (hi - lo) * uniform_(engine_);
    }

    double RandomStream::normal()
    {
        return normal_(engine_);
    }

    std::complex<double> RandomStream::complex_normal(double var)
    {
        const double s = std::sqrt(0.5 * var);
        double re = normal_(engine_);
        double im = normal_(engine_);
        return {s * re, s * im};
    }

    Eigen::VectorXcd RandomStream::complex_normal_vector(Eigen::Index n, double var)
    {
        Eigen::VectorXcd v(n);
        for (Eigen::Index i = 0; i < n; ++i)
            v[i] = complex_normal(var);
        return v;
    }

    Eigen::MatrixXcd RandomStream::complex_normal_matrix(Eigen::Index rows, Eigen::Index cols, double var)
    {
        Eigen::MatrixXcd m(rows, cols);
        for (Eigen::Index c = 0; c < cols; ++c)
            for (Eigen::Index r = 0; r < rows; ++r)
                m(r, c) = complex_normal(var);
        return m;
    }
}
