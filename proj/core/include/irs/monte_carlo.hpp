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
#ifndef IRS_MONTE_CARLO_HPP
#define IRS_MONTE_CARLO_HPP

#include <cstddef>
#include <functional>
#include <vector>

#include "irs/random.hpp"

namespace irs
{
    // Count, mean and sum of squared deviations; merged with the parallel update of Chan et al.
    struct RunningStats
    {
        double count = 0.0;
        double mean = 0.0;
        double m2 = 0.0;

        void add(double x);
        static RunningStats merge(const RunningStats &a, const RunningStats &b);
        double variance() const;  // unbiased, 0 for fewer than two samples
        double std_error() const; // sqrt(variance / count)
    };

    struct McOptions
    {
        unsigned workers = 0;         // 0 picks the hardware concurrency
        std::size_t block_size = 64;  // trials per reduction leaf; part of the result's identity
    };

    // Body of one trial: fills `out` with `metrics` values using its own random stream
    using TrialFn = std::function<void(std::size_t trial, RandomStream &rng, double *out)>;

    // Runs trials [0, trials) with trial t drawing from root.substream(t). Trials are grouped into
    // fixed blocks reduced in trial order, and blocks are combined by a fixed pairwise tree, so the
    // result does not depend on the number of workers.
    std::vector<RunningStats> run_trials(std::size_t trials, std::size_t metrics, const RandomStream &root,
                                         const TrialFn &fn, const McOptions &opts = {});

    unsigned resolve_workers(unsigned requested);
}

#endif
