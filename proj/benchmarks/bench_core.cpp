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
#include <benchmark/benchmark.h>

#include "irs/beamforming.hpp"
#include "irs/capacity.hpp"
#include "irs/estimation.hpp"
#include "irs/monte_carlo.hpp"

namespace
{
    irs::SystemConfig link(int M, int N)
    {
        irs::SystemConfig c;
        c.M = M;
        c.N = N;
        c.kappa_b = c.kappa_u = 1e-4;
        c.p_b = c.p_u = irs::db_to_linear(15.0);
        c.tau = 1024;
        c.tau1 = 0;
        c.tau2 = std::max(N, 1);
        c.tau_u = 0;
        c.tau_d = 512;
        return c;
    }

    void objective_and_gradient(benchmark::State &state)
    {
        const auto c = link(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
        irs::RandomStream r(1);
        const auto real = irs::sample_channels(c, r);
        const Eigen::VectorXd theta = irs::initial_phases(real);
        for (auto _ : state)
        {
            benchmark::DoNotOptimize(irs::objective_p4(theta, real, c));
            benchmark::DoNotOptimize(irs::gradient_p4(theta, real, c));
        }
    }
    BENCHMARK(objective_and_gradient)->Args({5, 64})->Args({5, 256})->Args({64, 256});

    void phase_optimizer(benchmark::State &state)
    {
        const auto c = link(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
        irs::RandomStream r(2);
        const auto real = irs::sample_channels(c, r);
        for (auto _ : state)
            benchmark::DoNotOptimize(irs::gdm_optimize(real, c));
    }
    BENCHMARK(phase_optimizer)->Args({5, 50})->Args({5, 400})->Unit(benchmark::kMillisecond);

    void cascade_estimator(benchmark::State &state)
    {
        irs::SystemConfig c;
        c.M = 10;
        c.N = static_cast<int>(state.range(0));
        c.tau2 = static_cast<int>(state.range(1));
        c.tau = c.tau2 + 200;
        c.p_u = 10.0;
        const Eigen::MatrixXcd Phi = irs::dft_pilot_matrix(c.N, c.tau2);
        const double eps_I = irs::direct_mse_single(c);
        for (auto _ : state)
            benchmark::DoNotOptimize(irs::CascadeEstimator(Phi, eps_I, c).mse());
    }
    BENCHMARK(cascade_estimator)->Args({25, 32})->Args({25, 512})->Args({200, 256})->Unit(benchmark::kMicrosecond);

    void trial_runner(benchmark::State &state)
    {
        const irs::RandomStream root(3);
        irs::McOptions opt;
        opt.workers = static_cast<unsigned>(state.range(0));
        auto body = [](std::size_t, irs::RandomStream &rng, double *out) { out[0] = rng.normal(); };
        for (auto _ : state)
            benchmark::DoNotOptimize(irs::run_trials(100000, 1, root, body, opt));
    }
    BENCHMARK(trial_runner)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

    void ergodic_capacity(benchmark::State &state)
    {
        const auto c = link(5, static_cast<int>(state.range(0)));
        const irs::RandomStream root(4);
        irs::McOptions opt;
        opt.workers = 1;
        for (auto _ : state)
            benchmark::DoNotOptimize(irs::ergodic_capacity_mc(c, irs::PhasePolicy::gdm, 64, root, opt));
    }
    BENCHMARK(ergodic_capacity)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);
}

BENCHMARK_MAIN();
