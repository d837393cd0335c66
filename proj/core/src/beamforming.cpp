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
#include "irs/beamforming.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace irs
{
    using cd = std::complex<double>;

    namespace
    {
        void require_positive_link(const SystemConfig &c)
        {
            if (!(c.sigma2_b > 0.0 && c.sigma2_u > 0.0 && c.p_u > 0.0 && c.p_b > 0.0))
                throw std::invalid_argument("noise shaping needs positive noise and transmit powers");
        }

        Eigen::VectorXcd normalized_solve(const Eigen::MatrixXcd &A, const Eigen::VectorXcd &h)
        {
            Eigen::LLT<Eigen::MatrixXcd> llt(A);
            if (llt.info() != Eigen::Success || !(llt.rcond() * 1e12 >= 1.0))
                throw NumericalError("optimal_beamformers: noise shaping matrix is singular");
            Eigen::VectorXcd w = llt.solve(h);
            const double n = w.norm();
            if (n == 0.0)
            {
                Eigen::VectorXcd e = Eigen::VectorXcd::Zero(h.size());
                e[0] = 1.0;
                return e;
            }
            return w / n;
        }

        double rayleigh(const Eigen::VectorXcd &w, const Eigen::VectorXcd &h, double kappa, double kappa_u,
                        double noise_over_power)
        {
            const double signal = std::norm(h.dot(w));
            double den = kappa_u * signal;
            for (Eigen::Index m = 0; m < h.size(); ++m)
                den += (kappa * std::norm(h[m]) + noise_over_power) * std::norm(w[m]);
            return den > 0.0 ? signal / den : 0.0;
        }

        Eigen::VectorXcd steering(const Eigen::VectorXd &theta)
        {
            Eigen::VectorXcd v(theta.size());
            for (Eigen::Index n = 0; n < theta.size(); ++n)
                v[n] = std::polar(1.0, theta[n]);
            return v;
        }

        Eigen::VectorXcd combined_channel(const Eigen::VectorXd &theta, const ChannelRealization &real)
        {
            if (theta.size() != real.N())
                throw std::invalid_argument("phase vector length differs from N");
            if (real.N() == 0)
                return real.h_d;
            return real.h_d + real.H_R * steering(theta);
        }
    }

    double combined_distortion(const SystemConfig &c)
    {
        return (1.0 + c.kappa_u) * c.kappa_b;
    }

    NoiseShapingMatrices noise_shaping_matrices(const Eigen::VectorXcd &h_hat, const SystemConfig &c)
    {
        require_positive_link(c);
        const Eigen::VectorXd d = h_hat.cwiseAbs2() * combined_distortion(c);
        const Eigen::MatrixXcd rank_one = c.kappa_u * (h_hat * h_hat.adjoint());

        NoiseShapingMatrices out;
        out.D_tilde = (d.array() + c.sigma2_u / c.p_b).matrix().cast<cd>().asDiagonal();
        out.D = out.D_tilde + rank_one;
        out.U = Eigen::MatrixXcd((d.array() + c.sigma2_b / c.p_u).matrix().cast<cd>().asDiagonal()) + rank_one;
        return out;
    }

    Beamformers optimal_beamformers(const Eigen::VectorXcd &h_hat, const NoiseShapingMatrices &mats)
    {
        if (mats.U.rows() != h_hat.size() || mats.D.rows() != h_hat.size())
            throw std::invalid_argument("optimal_beamformers: matrix size differs from the channel length");
        return {normalized_solve(mats.U, h_hat), normalized_solve(mats.D, h_hat)};
    }

    double snr_downlink(const Eigen::VectorXcd &w, const Eigen::VectorXcd &h_hat, const SystemConfig &c)
    {
        return rayleigh(w, h_hat, combined_distortion(c), c.kappa_u, c.sigma2_u / c.p_b);
    }

    double snr_uplink(const Eigen::VectorXcd &w, const Eigen::VectorXcd &h_hat, const SystemConfig &c)
    {
        return rayleigh(w, h_hat, combined_distortion(c), c.kappa_u, c.sigma2_b / c.p_u);
    }

    double objective_p4(const Eigen::VectorXd &theta, const ChannelRealization &real, const SystemConfig &c)
    {
        const Eigen::VectorXcd u = combined_channel(theta, real);
        const double kappa = combined_distortion(c);
        const double s = c.sigma2_u / c.p_b;
        double f = 0.0;
        for (Eigen::Index i = 0; i < u.size(); ++i)
        {
            const double a = std::norm(u[i]);
            f += a / (kappa * a + s);
        }
        return f;
    }

    Eigen::VectorXd gradient_p4(const Eigen::VectorXd &theta, const ChannelRealization &real, const SystemConfig &c)
    {
        const Eigen::VectorXcd v = steering(theta);
        const Eigen::VectorXcd u = combined_channel(theta, real);
        const double kappa = combined_distortion(c);
        const double s = c.sigma2_u / c.p_b;

        Eigen::VectorXcd weight(u.size());
        for (Eigen::Index i = 0; i < u.size(); ++i)
        {
            const double den = kappa * std::norm(u[i]) + s;
            weight[i] = std::conj(u[i]) / (den * den);
        }
        const Eigen::VectorXcd t = real.H_R.transpose() * weight;
        Eigen::VectorXd g(theta.size());
        for (Eigen::Index n = 0; n < theta.size(); ++n)
            g[n] = 2.0 * s * (cd(0.0, 1.0) * v[n] * t[n]).real();
        return g;
    }

    Eigen::VectorXd initial_phases(const ChannelRealization &real)
    {
        const Eigen::Index N = real.N();
        Eigen::VectorXd theta = Eigen::VectorXd::Zero(N);
        if (N == 0 || real.M() == 0)
            return theta;
        Eigen::Index best = 0;
        real.h_d.cwiseAbs2().maxCoeff(&best);
        const double ref = std::arg(real.h_d[best]);
        for (Eigen::Index n = 0; n < N; ++n)
            theta[n] = ref - std::arg(real.H_R(best, n));
        return theta;
    }

    BeamformingSolution gdm_optimize(const ChannelRealization &real, const SystemConfig &config,
                                     const GdmOptions &opts)
    {
        return gdm_optimize(real, config, initial_phases(real), opts);
    }

    BeamformingSolution gdm_optimize(const ChannelRealization &real, const SystemConfig &config,
                                     const Eigen::VectorXd &theta0, const GdmOptions &opts)
    {
        if (real.N() < 1)
            throw std::invalid_argument("gdm_optimize: needs at least one reflecting element");
        if (theta0.size() != real.N())
            throw std::invalid_argument("gdm_optimize: start vector length differs from N");

        BeamformingSolution sol;
        Eigen::VectorXd theta = theta0;
        double f = objective_p4(theta, real, config);
        sol.objective_trace.emplace_back(0, f);

        for (int it = 1; it <= opts.max_iters; ++it)
        {
            const Eigen::VectorXd g = gradient_p4(theta, real, config);
            const double gg = g.squaredNorm();
            if (!(gg > 0.0) || !std::isfinite(gg))
            {
                sol.converged = true;
                break;
            }

            double step = opts.initial_step;
            bool accepted = false;
            Eigen::VectorXd candidate;
            double fc = f;
            for (int b = 0; b < opts.max_backtracks; ++b, step *= opts.shrink)
            {
                candidate = theta + step * g;
                fc = objective_p4(candidate, real, config);
                if (fc > f && fc >= f + opts.armijo_slope * step * gg)
                {
                    accepted = true;
                    break;
                }
            }
            if (!accepted)
            {
                sol.converged = true; // no ascent left at working precision
                break;
            }

            const double gain = fc - f;
            theta = candidate;
            f = fc;
            sol.iterations = it;
            sol.objective_trace.emplace_back(it, f);
            if (gain < opts.tolerance * std::abs(f))
            {
                sol.converged = true;
                break;
            }
        }

        sol.theta_opt = make_phase_state(theta).theta;
        const Eigen::VectorXcd h = combined_channel(theta, real);
        const Beamformers bf = optimal_beamformers(h, noise_shaping_matrices(h, config));
        sol.w_tx = bf.w_tx;
        sol.w_rx = bf.w_rx;
        sol.snr_downlink = snr_downlink(sol.w_tx, h, config);
        return sol;
    }
}
