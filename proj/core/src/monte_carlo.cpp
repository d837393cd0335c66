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
#include "irs/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace irs
{
    void RunningStats::add(double x)
    {
        count += 1.0;
        const double d = x - mean;
        mean += d / count;
        m2 += d * (x - mean);
    }

    RunningStats RunningStats::merge(const RunningStats &a, const RunningStats &b)
    {
        if (a.count == 0.0)
            return b;
        if (b.count == 0.0)
            return a;
        RunningStats r;
        r.count = a.count + b.count;
        const double d = b.mean - a.mean;
        r.mean = a.mean + d * (b.count / r.count);
        r.m2 = a.m2 + b.m2 + d * d * (a.count * b.count / r.count);
        return r;
    }

    double RunningStats::variance() const
    {
        return count > 1.0 ? m2 / (count - 1.0) : 0.0;
    }

    double RunningStats::std_error() const
    {
        return count > 0.0 ? std::sqrt(variance() / count) : 0.0;
    }

    unsigned resolve_workers(unsigned requested)
    {
        if (requested > 0)
            return requested;
        unsigned hw = std::thread::hardware_concurrency();
        return hw > 0 ? hw : 1;
    }

    namespace
    {
        using Block = std::vector<RunningStats>;

        Block reduce_tree(const std::vector<Block> &blocks, std::size_t lo, std::size_t hi)
        {
            if (hi - lo == 1)
                return blocks[lo];
            const std::size_t mid = lo + (hi - lo) / 2;
            Block a = reduce_tree(blocks, lo, mid);
            const Block b = reduce_tree(blocks, mid, hi);
            for (std::size_t i = 0; i < a.size(); ++i)
                a[i] = RunningStats::merge(a[i], b[i]);
            return a;
        }
    }

    std::vector<RunningStats> run_trials(std::size_t trials, std::size_t metrics, const RandomStream &root,
                                         const TrialFn &fn, const McOptions &opts)
    {
        if (opts.block_size == 0)
            throw std::invalid_argument("run_trials: block size must be positive");
        if (trials == 0)
            return std::vector<RunningStats>(metrics);

        const std::size_t n_blocks = (trials + opts.block_size - 1) / opts.block_size;
        std::vector<Block> blocks(n_blocks, Block(metrics));
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;

        auto worker = [&]()
        {
            std::vector<double> out(metrics);
            while (true)
            {
                const std::size_t b = next.fetch_add(1);
                if (b >= n_blocks)
                    return;
                try
                {
                    const std::size_t first = b * opts.block_size;
                    const std::size_t last = std::min(trials, first + opts.block_size);
                    for (std::size_t t = first; t < last; ++t)
                    {
                        RandomStream rng = root.substream(t);
                        std::fill(out.begin(), out.end(), 0.0);
                        fn(t, rng, out.data());
                        for (std::size_t m = 0; m < metrics; ++m)
                            blocks[b][m].add(out[m]);
                    }
                }
                catch (...)
                {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                    next.store(n_blocks);
                    return;
                }
            }
        };

        const unsigned n_workers = static_cast<unsigned>(std::min<std::size_t>(resolve_workers(opts.workers), n_blocks));
        if (n_workers <= 1)
            worker();
        else
        {
            std::vector<std::thread> pool;
            pool.reserve(n_workers);
            for (unsigned w = 0; w < n_workers; ++w)
                pool.emplace_back(worker);
            for (auto &t : pool)
                t.join();
        }
        if (failure)
            std::rethrow_exception(failure);
        return reduce_tree(blocks, 0, n_blocks);
    }
}
