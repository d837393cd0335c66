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
#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "irs/beamforming.hpp"
#include "irs/capacity.hpp"
#include "support.hpp"

using namespace irs;
using irs::test::objective_long_double;
using irs::test::rel_err;
using cd = std::complex<double>;

namespace
{
    SystemConfig link_config(double kappa, int M, int N)
    {
        SystemConfig c;
        c.M = M;
        c.N = N;
        c.beta_d = 1.0;
        c.beta_r = 0.1;
        c.kappa_b = c.kappa_u = kappa;
        c.p_b = c.p_u = 10.0;
        c.sigma2_b = c.sigma2_u = 1.0;
        c.tau = 1024;
        c.tau1 = 0;
        c.tau2 = 512 > N ? 512 : N;
        c.tau_u = 0;
        c.tau_d = 512;
        return c;
    }

    Eigen::MatrixXcd dense_inverse_form(const Eigen::MatrixXcd &A) { return A.inverse(); }
}

TEST_CASE("noise shaping matrices", "[beamforming]")
{
    auto r = irs::test::stream(40);
    const SystemConfig c = link_config(0.01, 5, 0);
    const Eigen::VectorXcd h = r.complex_normal_vector(5);
    const auto mats = noise_shaping_matrices(h, c);
    CHECK((mats.D - mats.D_tilde - c.kappa_u * h * h.adjoint()).norm() < 1e-15);
    const Eigen::MatrixXcd off = mats.D_tilde - Eigen::MatrixXcd(mats.D_tilde.diagonal().asDiagonal());
    CHECK(off.norm() == 0.0);
    for (int m = 0; m < 5; ++m)
    {
        const double d = (1.0 + c.kappa_u) * c.kappa_b * std::norm(h[m]);
        CHECK(rel_err(mats.D_tilde(m, m).real(), d + c.sigma2_u / c.p_b) < 1e-14);
        CHECK(rel_err(mats.U(m, m).real(), d + c.kappa_u * std::norm(h[m]) + c.sigma2_b / c.p_u) < 1e-14);
    }

    SystemConfig one = link_config(0.02, 1, 0);
    Eigen::VectorXcd h1(1);
    h1[0] = cd(0.3, -1.1);
    const double a = std::norm(h1[0]);
    const auto m1 = noise_shaping_matrices(h1, one);
    CHECK(rel_err(m1.D(0, 0).real(), (1.0 + one.kappa_u) * one.kappa_b * a + one.kappa_u * a + 0.1) < 1e-14);

    SystemConfig silent = c;
    silent.sigma2_u = 0.0;
    CHECK_THROWS_AS(noise_shaping_matrices(h, silent), std::invalid_argument);
}

TEST_CASE("optimal beamformers maximize the Rayleigh quotient", "[beamforming]")
{
    auto r = irs::test::stream(41);
    for (double kappa : {0.0, 1e-4, 1e-2, 0.1})
    {
        const SystemConfig c = link_config(kappa, 6, 0);
        const Eigen::VectorXcd h = r.complex_normal_vector(6);
        const auto mats = noise_shaping_matrices(h, c);
        const auto bf = optimal_beamformers(h, mats);
        CHECK(std::abs(bf.w_tx.norm() - 1.0) < 1e-14);
        CHECK(std::abs(bf.w_rx.norm() - 1.0) < 1e-14);

        const double best_d = snr_downlink(bf.w_tx, h, c), best_u = snr_uplink(bf.w_rx, h, c);
        CHECK(rel_err(best_d, (h.adjoint() * dense_inverse_form(mats.D) * h)(0, 0).real()) < 1e-10);
        CHECK(rel_err(best_u, (h.adjoint() * dense_inverse_form(mats.U) * h)(0, 0).real()) < 1e-10);
        CHECK(rel_err(best_d, downlink_quadratic_form(h, c)) < 1e-10);
        CHECK(rel_err(best_u, uplink_quadratic_form(h, c)) < 1e-10);

        const Eigen::MatrixXcd S = h * h.adjoint();
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXcd> ges(S, mats.D);
        CHECK(rel_err(best_d, ges.eigenvalues().maxCoeff()) < 1e-9);

        for (int t = 0; t < 2000; ++t)
        {
            const Eigen::VectorXcd w = irs::test::random_unit(6, r);
            CHECK(snr_downlink(w, h, c) <= best_d * (1.0 + 1e-12));
            CHECK(snr_uplink(w, h, c) <= best_u * (1.0 + 1e-12));
        }
        if (kappa == 0.0)
            CHECK(std::abs(bf.w_tx.dot(h)) == Catch::Approx(h.norm()).epsilon(1e-12));
    }
}

TEST_CASE("phase objective gradient matches finite differences", "[beamforming]")
{
    auto r = irs::test::stream(42);
    for (int rep = 0; rep < 10; ++rep)
    {
        const SystemConfig c = link_config(rep % 2 ? 1e-2 : 1e-4, 1 + rep % 4, 2 + rep);
        const auto real = sample_channels(c, r);
        Eigen::VectorXd theta(c.N);
        for (int n = 0; n < c.N; ++n)
            theta[n] = r.uniform(-std::numbers::pi, std::numbers::pi);
        const Eigen::VectorXd g = gradient_p4(theta, real, c);
        Eigen::VectorXd fd(c.N);
        const double step = 1e-6;
        for (int n = 0; n < c.N; ++n)
        {
            Eigen::VectorXd a = theta, b = theta;
            a[n] += step;
            b[n] -= step;
            fd[n] = static_cast<double>((objective_long_double(a, real, c) - objective_long_double(b, real, c)) /
                                        (2.0L * step));
        }
        CHECK((g - fd).norm() <= 1e-6 * std::max(1.0, g.norm()));
        CHECK(rel_err(objective_p4(theta, real, c), static_cast<double>(objective_long_double(theta, real, c))) < 1e-12);

        Eigen::VectorXd shifted = theta;
        shifted[rep % c.N] += 2.0 * std::numbers::pi;
        CHECK(rel_err(objective_p4(shifted, real, c), objective_p4(theta, real, c)) < 1e-12);
    }
}

TEST_CASE("single-antenna phase optimum is the aligned configuration", "[beamforming]")
{
    auto r = irs::test::stream(43);
    for (int rep = 0; rep < 20; ++rep)
    {
        const SystemConfig c = link_config(1e-3, 1, 1 + rep);
        const auto real = sample_channels(c, r);
        const Eigen::VectorXd aligned = initial_phases(real);
        const Eigen::VectorXd g = gradient_p4(aligned, real, c);
        CHECK(g.cwiseAbs().maxCoeff() < 1e-9 * std::max(1.0, objective_p4(aligned, real, c)));

        const double amp = std::abs(real.h_d[0]) + real.H_R.row(0).cwiseAbs().sum();
        const double kappa = (1.0 + c.kappa_u) * c.kappa_b;
        const double best = amp * amp / (kappa * amp * amp + c.sigma2_u / c.p_b);
        CHECK(rel_err(objective_p4(aligned, real, c), best) < 1e-12);

        Eigen::VectorXd start(c.N);
        for (int n = 0; n < c.N; ++n)
            start[n] = r.uniform(-std::numbers::pi, std::numbers::pi);
        const auto sol = gdm_optimize(real, c, start, GdmOptions{});
        CHECK(objective_p4(sol.theta_opt, real, c) <= best * (1.0 + 1e-12));
        CHECK(objective_p4(sol.theta_opt, real, c) >= best * (1.0 - 1e-5));
    }
}

TEST_CASE("phase optimizer reaches the grid optimum of a small link", "[beamforming]")
{
    auto r = irs::test::stream(44);
    const int grid = 2000;
    for (int rep = 0; rep < 4; ++rep)
    {
        const SystemConfig c = link_config(rep % 2 ? 0.05 : 1e-4, 2, 2);
        const auto real = sample_channels(c, r);
        double grid_best = 0.0;
        Eigen::VectorXd theta(2);
        for (int i = 0; i < grid; ++i)
            for (int j = 0; j < grid; ++j)
            {
                theta << 2.0 * std::numbers::pi * i / grid, 2.0 * std::numbers::pi * j / grid;
                grid_best = std::max(grid_best, objective_p4(theta, real, c));
            }
        const auto sol = gdm_optimize(real, c);
        const double got = objective_p4(sol.theta_opt, real, c);
        CHECK(got >= grid_best * (1.0 - 1e-6));
        CHECK(sol.converged);

        for (std::size_t i = 1; i < sol.objective_trace.size(); ++i)
        {
            CHECK(sol.objective_trace[i].first == sol.objective_trace[i - 1].first + 1);
            CHECK(sol.objective_trace[i].second >= sol.objective_trace[i - 1].second);
        }
        CHECK(rel_err(sol.objective_trace.back().second, got) < 1e-12);
        CHECK((sol.theta_opt.array() >= 0.0).all());
        CHECK((sol.theta_opt.array() < 2.0 * std::numbers::pi).all());
    }
}

TEST_CASE("phase objective and downlink SNR formulations agree", "[beamforming]")
{
    auto r = irs::test::stream(45);
    for (int rep = 0; rep < 10; ++rep)
    {
        const SystemConfig c = link_config(0.01, 2 + rep, 8);
        const auto real = sample_channels(c, r);
        const auto sol = gdm_optimize(real, c);
        const Eigen::VectorXcd h = overall_channel(real, make_phase_state(sol.theta_opt));
        const double x = objective_p4(sol.theta_opt, real, c);
        CHECK(rel_err(sol.snr_downlink, x / (1.0 + c.kappa_u * x)) < 1e-10);
        CHECK(rel_err(sol.snr_downlink, downlink_quadratic_form(h, c)) < 1e-10);
        const auto mats = noise_shaping_matrices(h, c);
        CHECK(rel_err(x, (h.adjoint() * dense_inverse_form(mats.D_tilde) * h)(0, 0).real()) < 1e-10);
        CHECK(x >= objective_p4(initial_phases(real), real, c));
    }
}

TEST_CASE("phase optimizer input checks", "[beamforming]")
{
    auto r = irs::test::stream(46);
    const SystemConfig c = link_config(0.01, 3, 4);
    const auto real = sample_channels(c, r);
    CHECK_THROWS_AS(gdm_optimize(real, c, Eigen::VectorXd::Zero(3), GdmOptions{}), std::invalid_argument);
    CHECK_THROWS_AS(objective_p4(Eigen::VectorXd::Zero(5), real, c), std::invalid_argument);
    SystemConfig none = link_config(0.01, 3, 0);
    CHECK_THROWS_AS(gdm_optimize(sample_channels(none, r), none), std::invalid_argument);

    GdmOptions capped;
    capped.max_iters = 1;
    capped.tolerance = 0.0;
    const auto sol = gdm_optimize(real, c, capped);
    CHECK(sol.iterations <= 1);
    CHECK(sol.objective_trace.size() <= 2);
}
