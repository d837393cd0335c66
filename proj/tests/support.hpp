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
#ifndef IRS_TESTS_SUPPORT_HPP
#define IRS_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "irs/config.hpp"
#include "irs/random.hpp"
#include "irs/system_model.hpp"

namespace irs::test
{
    inline double rel_err(double got, double want)
    {
        const double scale = std::max(std::abs(want), 1e-300);
        return std::abs(got - want) / scale;
    }

    inline RandomStream stream(std::uint64_t index) { return RandomStream(20251015, stream_tag::test, index); }

    // Small valid configuration with every impairment active
    inline SystemConfig random_config(RandomStream &r, int max_M = 6, int max_N = 6)
    {
        SystemConfig c;
        c.M = 1 + static_cast<int>(r() % static_cast<unsigned>(max_M));
        c.N = 1 + static_cast<int>(r() % static_cast<unsigned>(max_N));
        c.K = 1;
        c.beta_d = r.uniform(0.2, 2.0);
        c.beta_r = r.uniform(0.05, 1.0);
        c.kappa_b = r.uniform(0.0, 0.02);
        c.kappa_u = r.uniform(0.0, 0.02);
        c.p_u = r.uniform(0.5, 50.0);
        c.p_b = r.uniform(0.5, 50.0);
        c.sigma2_b = r.uniform(0.2, 2.0);
        c.sigma2_u = r.uniform(0.2, 2.0);
        c.tau1 = 1 + static_cast<int>(r() % 8u);
        c.tau2 = c.N + static_cast<int>(r() % 8u);
        c.tau3 = 0;
        c.tau_u = 10;
        c.tau_d = 10;
        c.tau = c.tau1 + c.tau2 + c.tau_u + c.tau_d + 5;
        return c;
    }

    // Reflect-phase objective evaluated in long double, for finite-difference references
    inline long double objective_long_double(const Eigen::VectorXd &theta, const ChannelRealization &real,
                                             const SystemConfig &c)
    {
        const long double kappa = (1.0L + c.kappa_u) * c.kappa_b;
        const long double s = static_cast<long double>(c.sigma2_u) / c.p_b;
        long double f = 0.0L;
        for (Eigen::Index m = 0; m < real.M(); ++m)
        {
            std::complex<long double> u(real.h_d[m].real(), real.h_d[m].imag());
            for (Eigen::Index n = 0; n < real.N(); ++n)
            {
                const std::complex<long double> h(real.H_R(m, n).real(), real.H_R(m, n).imag());
                u += h * std::polar(1.0L, static_cast<long double>(theta[n]));
            }
            const long double a = std::norm(u);
            f += a / (kappa * a + s);
        }
        return f;
    }

    inline Eigen::VectorXcd random_unit(Eigen::Index n, RandomStream &r)
    {
        Eigen::VectorXcd w = r.complex_normal_vector(n);
        return w / w.norm();
    }
}

#endif
