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

#include "irs/power_energy.hpp"
#include "support.hpp"

using namespace irs;
using irs::test::rel_err;

namespace
{
    SystemConfig energy_config(int M)
    {
        SystemConfig c;
        c.M = M;
        c.N = 16;
        c.kappa_b = c.kappa_u = 1e-4;
        c.p_u = 0.2;
        c.p_b = 3.0;
        c.tau = 1000;
        c.tau1 = 0;
        c.tau2 = 100;
        c.tau_u = 384;
        c.tau_d = 384;
        return c;
    }
}

TEST_CASE("uplink power scaling laws", "[power_energy]")
{
    PowerScalingConfig ps;
    CHECK(rel_err(scaled_power(ps, 20, 100), 4.9995000499950005e-6) < 1e-15);
    CHECK(scaled_power(ps, 1, 0) == 1.0);
    ps.E_u = 3.0;
    ps.k = 0.5;
    CHECK(rel_err(scaled_power(ps, 4, 2), 3.0 / (4.0 * 3.0)) < 1e-15);

    ps.csi_mode = CsiMode::imperfect;
    CHECK(rel_err(scaled_power(ps, 4, 2), 3.0 / (2.0 * 3.0)) < 1e-15);
    ps.alpha = 0.5;
    CHECK(rel_err(scaled_power(ps, 4, 2), 0.5) < 1e-15);
    ps.alpha = 0.25;
    CHECK(rel_err(scaled_power(ps, 16, 2), 3.0 / (2.0 * std::sqrt(3.0))) < 1e-15);
    CHECK(rel_err(scaled_power_exponent(3.0, 0.5, 0.25, 16, 2), 3.0 / (2.0 * std::sqrt(3.0))) < 1e-15);
    CHECK(rel_err(scaled_power_exponent(1.0, 1.0, 0.75, 16, 1), 1.0 / (8.0 * std::pow(2.0, 1.5))) < 1e-15);

    ps.alpha = 0.75;
    CHECK(ps.violations().size() == 1);
    CHECK_THROWS_AS(scaled_power(ps, 4, 2), ValidationError);
    ps.alpha.reset();
    ps.k = 0.0;
    CHECK_THROWS_AS(scaled_power(ps, 4, 2), ValidationError);
    ps.k = 1.0;
    CHECK_THROWS_AS(scaled_power(ps, 0, 2), std::invalid_argument);
    CHECK_THROWS_AS(scaled_power_exponent(1.0, 1.0, 0.0, 4, 2), std::invalid_argument);

    SystemConfig c;
    c.beta_d = 2.0;
    c.beta_r = 0.5;
    CHECK(cascade_ratio(c) == 0.25);
}

TEST_CASE("uplink rate expressions", "[power_energy]")
{
    SystemConfig c;
    c.kappa_b = c.kappa_u = 0.01;
    c.sigma2_b = 1.5;
    Eigen::VectorXcd h(3);
    h << std::complex<double>(1.0, 0.0), std::complex<double>(0.0, 1.0), std::complex<double>(-1.0, 0.0);
    CHECK(rel_err(rate_uplink_perfect(h, 2.0, c), 2.2621287472558231524) < 1e-14);
    CHECK(rel_err(rate_uplink_imperfect(h, 0.2, 2.0, c), 2.0085904085150413597) < 1e-14);
    CHECK(rate_uplink_imperfect(h, 0.0, 2.0, c) == rate_uplink_perfect(h, 2.0, c));
    CHECK(rate_uplink_perfect(Eigen::VectorXcd::Zero(3), 2.0, c) == 0.0);

    PowerScalingConfig ps;
    SystemConfig lim;
    lim.kappa_u = 0.0025;
    lim.sigma2_b = 2.0;
    CHECK(rel_err(rate_limit(ps, lim), 0.5843620032969239767) < 1e-14);
    ps.csi_mode = CsiMode::imperfect;
    ps.E_u = 2.0;
    CHECK(rel_err(rate_limit(ps, lim), std::log2(1.0 + 4.0 / (0.0025 * 4.0 + 2.0))) < 1e-14);
    // Without distortion the rate grows without bound in E_u
    lim.kappa_u = 0.0;
    CHECK(rate_limit(ps, lim) > std::log2(1.0 + 4.0 / 2.0) - 1e-12);
}

TEST_CASE("imperfect estimate statistics", "[power_energy]")
{
    const double p = 0.3, beta = 5.0;
    CHECK(rel_err(imperfect_estimate_variance(p, beta) + imperfect_error_variance(p, beta), beta) < 1e-15);
    CHECK(imperfect_channel_gain(0.5, 4, 2.0) == 18.0);
    auto r = irs::test::stream(70);
    double acc = 0.0;
    const int n = 20000;
    for (int t = 0; t < n; ++t)
        acc += sample_imperfect_estimate(4, p, beta, r).squaredNorm();
    CHECK(rel_err(acc / (4.0 * n), imperfect_estimate_variance(p, beta)) < 0.03);
}

TEST_CASE("scaled rate Monte Carlo", "[power_energy]")
{
    SystemConfig c;
    c.kappa_b = c.kappa_u = 0.0025;
    c.sigma2_b = 2.0;
    c.beta_d = 1.0;
    c.beta_r = 1e-5;
    const RandomStream root(3, stream_tag::test, 1);
    PowerScalingConfig ps;
    ps.k = cascade_ratio(c);
    const auto perfect = scaled_rate_mc(ps, c, 8, 4, 64, root);
    CHECK(perfect.p_u == scaled_power(ps, 8, 4));
    CHECK(perfect.mean > 0.0);
    CHECK(perfect.std_error > 0.0);
    CHECK_THROWS_AS(scaled_rate_mc(ps, c, 8, 4, 64, root, {}, 0.75), std::invalid_argument);
    CHECK_THROWS_AS(scaled_rate_mc(ps, c, 8, 4, 0, root), std::invalid_argument);

    ps.csi_mode = CsiMode::imperfect;
    const auto half = scaled_rate_mc(ps, c, 8, 4, 64, root);
    const auto same = scaled_rate_mc(ps, c, 8, 4, 64, root, {}, 0.5);
    CHECK(half.mean == same.mean);
    const auto aggressive = scaled_rate_mc(ps, c, 8, 4, 64, root, {}, 0.75);
    CHECK(aggressive.p_u == scaled_power_exponent(1.0, ps.k, 0.75, 8, 4));
    CHECK(aggressive.mean < half.mean);
}

TEST_CASE("energy accounting", "[power_energy]")
{
    auto r = irs::test::stream(71);
    for (int rep = 0; rep < 50; ++rep)
    {
        SystemConfig c = energy_config(1 + static_cast<int>(r() % 64u));
        c.p_u = r.uniform(0.0, 5.0);
        c.p_b = r.uniform(0.0, 5.0);
        EnergyConfig e;
        e.rho = r.uniform(0.0, 1e-3);
        e.zeta = r.uniform(1e-7, 1e-3);
        e.tau_pilot = static_cast<int>(r() % 200u);
        const auto a = average_power(e, c);
        CHECK(std::abs(a.downlink + a.uplink - block_energy(e, c) / c.tau) <= 1e-12 * block_energy(e, c) / c.tau);
    }

    SystemConfig c = energy_config(8);
    EnergyConfig e;
    const auto b = ee_bounds(e, c);
    CHECK(rel_err(b.lower, 18874258.592536938612848) < 1e-13);
    CHECK(rel_err(b.upper, 20410147.801867075500533) < 1e-13);
    CHECK(rel_err(b.finite_M_upper, 20149146.077364770161898) < 1e-13);
    CHECK(b.lower <= b.finite_M_upper);
    CHECK(b.finite_M_upper <= b.upper);

    SystemConfig ideal = c;
    ideal.kappa_b = ideal.kappa_u = 0.0;
    CHECK(std::isinf(ee_bounds(e, ideal).upper));
    EnergyConfig none;
    none.zeta = 0.0;
    CHECK_THROWS_AS(ee_bounds(none, c), std::invalid_argument);
    CHECK(none.violations(c).size() == 1);
    EnergyConfig long_pilot;
    long_pilot.tau_pilot = 500;
    CHECK_THROWS_AS(average_power(long_pilot, c), ValidationError);

    const double cap = 3.0;
    CHECK(rel_err(energy_efficiency_downlink(cap, e, c), cap / average_power(e, c).downlink) < 1e-15);
    SystemConfig quiet = c;
    quiet.tau_d = 0;
    quiet.p_b = 0.0;
    EnergyConfig circuit_free;
    circuit_free.zeta = 1e-9;
    CHECK_THROWS_AS(energy_efficiency_downlink(1.0, circuit_free, quiet), std::domain_error);
}
