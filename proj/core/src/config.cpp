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
#include "irs/config.hpp"

#include <cmath>
#include <sstream>

namespace irs
{
    namespace
    {
        std::string join(const std::vector<std::string> &items)
        {
            std::ostringstream os;
            os << "invalid configuration:";
            for (const auto &s : items)
                os << "\n  - " << s;
            return os.str();
        }
    }

    ValidationError::ValidationError(std::vector<std::string> violations)
        : std::invalid_argument(join(violations)), violations_(std::move(violations))
    {
    }

    double SystemConfig::beta_g() const { return std::sqrt(beta_r); }
    double SystemConfig::beta_h() const { return std::sqrt(beta_r); }

    std::vector<std::string> SystemConfig::violations() const
    {
        std::vector<std::string> v;
        auto need = [&](bool ok, const std::string &msg)
        {
            if (!ok)
                v.push_back(msg);
        };
        auto finite_nonneg = [](double x) { return std::isfinite(x) && x >= 0.0; };
        auto finite_pos = [](double x) { return std::isfinite(x) && x > 0.0; };

        need(M >= 1, "M must be >= 1");
        need(N >= 0, "N must be >= 0");
        need(K >= 1, "K must be >= 1");
        need(finite_pos(beta_d), "beta_d must be > 0");
        need(finite_pos(beta_r), "beta_r must be > 0");
        need(finite_nonneg(kappa_b), "kappa_b must be >= 0");
        need(finite_nonneg(kappa_u), "kappa_u must be >= 0");
        need(finite_nonneg(p_u), "p_u must be >= 0");
        need(finite_nonneg(p_b), "p_b must be >= 0");
        need(finite_pos(sigma2_b), "sigma2_b must be > 0");
        need(finite_pos(sigma2_u), "sigma2_u must be > 0");
        need(tau >= 0 && tau1 >= 0 && tau2 >= 0 && tau3 >= 0 && tau_u >= 0 && tau_d >= 0,
             "slot counts must be >= 0");
        need(static_cast<long long>(tau1) + tau2 + tau3 + tau_u + tau_d <= tau,
             "tau1 + tau2 + tau3 + tau_u + tau_d must not exceed tau");
        need(tau2 >= N, "tau2 must be >= N");
        return v;
    }

    void SystemConfig::validate() const
    {
        auto v = violations();
        if (!v.empty())
            throw ValidationError(std::move(v));
    }

    double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
    double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
}
