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
#include "irs/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace irs
{
    using cd = std::complex<double>;

    namespace
    {
        constexpr double max_condition = 1e12;

        double v_u_of(const SystemConfig &c) { return c.kappa_u * c.p_u; }
        double v_b_direct(const SystemConfig &c) { return c.kappa_b * (c.p_u + v_u_of(c)) * c.beta_d; }

        // Solves A X = B for Hermitian positive definite A, refusing badly conditioned systems
        Eigen::MatrixXcd solve_hpd(const Eigen::MatrixXcd &A, const Eigen::MatrixXcd &B, const char *what)
        {
            Eigen::LLT<Eigen::MatrixXcd> llt(A);
            if (llt.info() != Eigen::Success)
                throw NumericalError(std::string(what) + ": system matrix is not positive definite");
            const double rc = llt.rcond();
            if (!(rc * max_condition >= 1.0))
                throw NumericalError(std::string(what) + ": system matrix is singular to working precision");
            return llt.solve(B);
        }
    }

    Eigen::MatrixXcd dft_pilot_matrix(int N, int tau2)
    {
        if (N < 0 || tau2 < N)
            throw std::invalid_argument("dft_pilot_matrix: tau2 must be >= N >= 0");
        Eigen::MatrixXcd Phi(N, tau2);
        for (int n = 0; n < N; ++n)
            for (int t = 0; t < tau2; ++t)
            {
                // Reduce the index product first so the angle stays exact for large sizes
                long long r = (static_cast<long long>(n) * t) % tau2;
                Phi(n, t) = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(r) / tau2);
            }
        return Phi;
    }

    Eigen::MatrixXcd orthogonal_pilots(int K, int tau1, double p_u)
    {
        if (K < 1 || tau1 < 0 || p_u < 0.0)
            throw std::invalid_argument("orthogonal_pilots: invalid arguments");
        if (tau1 > 0 && K > tau1)
            throw std::invalid_argument("orthogonal_pilots: need tau1 >= K for orthogonal rows");
        if (tau1 == 0)
            return Eigen::MatrixXcd(K, 0);
        return std::sqrt(p_u) * dft_pilot_matrix(K, tau1);
    }

    std::vector<Phase3Slot> phase3_schedule(int K, int N, int M)
    {
        if (K < 1 || N < 0 || M < 1)
            throw std::invalid_argument("phase3_schedule: invalid arguments");
        std::vector<Phase3Slot> slots;
        for (int k = 1; k < K; ++k)
            for (int first = 0; first < N; first += M)
            {
                Phase3Slot s;
                s.user = k;
                for (int n = first; n < std::min(N, first + M); ++n)
                    s.elements.push_back(n);
                slots.push_back(std::move(s));
            }
        return slots;
    }

    PilotPlan make_pilot_plan(const SystemConfig &config)
    {
        PilotPlan plan;
        plan.tau1 = config.tau1;
        plan.tau2 = config.tau2;
        plan.tau3 = config.tau3;
        plan.pilot_power = config.p_u;
        plan.pilots_phase1 = orthogonal_pilots(config.K, config.tau1, config.p_u);
        plan.Phi_II = dft_pilot_matrix(config.N, config.tau2);
        plan.phase3_schedule = phase3_schedule(config.K, config.N, config.M);
        return plan;
    }

    // ---- first phase ----

    double direct_gain_single(const SystemConfig &c)
    {
        const double den = c.beta_d * (c.tau1 * c.p_u + v_u_of(c)) + v_b_direct(c) + c.sigma2_b;
        return c.beta_d / den;
    }

    double direct_mse_single(const SystemConfig &c)
    {
        const double den = c.beta_d * (c.tau1 * c.p_u + v_u_of(c)) + v_b_direct(c) + c.sigma2_b;
        return c.M * c.beta_d - c.tau1 * c.p_u * c.M * c.beta_d * c.beta_d / den;
    }

    DirectEstimate estimate_direct_single(const Eigen::MatrixXcd &Y_I, const Eigen::VectorXcd &pilots,
                                          const SystemConfig &config)
    {
        if (Y_I.rows() != config.M || Y_I.cols() != pilots.size())
            throw std::invalid_argument("estimate_direct_single: Y_I must be M x tau1 matching the pilots");
        const double energy = pilots.squaredNorm();
        if (energy == 0.0)
            return {Eigen::VectorXcd::Zero(config.M), config.M * config.beta_d};

        const double expected = static_cast<double>(Y_I.cols()) * config.p_u;
        if (std::abs(energy - expected) > 1e-9 * std::max(1.0, expected))
            throw std::invalid_argument("estimate_direct_single: pilot energy differs from tau1 * p_u");

        SystemConfig c = config;
        c.tau1 = static_cast<int>(Y_I.cols());
        return {direct_gain_single(c) * (Y_I * pilots.conjugate()), direct_mse_single(c)};
    }

    double direct_mse_multi(const SystemConfig &c)
    {
        const double den = c.beta_d * c.tau1 * (c.p_u + v_u_of(c)) + v_b_direct(c) + c.sigma2_b;
        return c.K * (c.M * c.beta_d - c.tau1 * c.p_u * c.M * c.beta_d * c.beta_d / den);
    }

    MultiDirectEstimate estimate_direct_multi(const Eigen::MatrixXcd &Y_I, const Eigen::MatrixXcd &pilots,
                                              const SystemConfig &config)
    {
        if (Y_I.rows() != config.M || pilots.rows() != config.K || pilots.cols() != Y_I.cols())
            throw std::invalid_argument("estimate_direct_multi: expected Y_I [M x tau1] and pilots [K x tau1]");

        const double e = static_cast<double>(pilots.cols()) * config.p_u;
        const Eigen::MatrixXcd gram = pilots * pilots.adjoint();
        const Eigen::MatrixXcd target = e * Eigen::MatrixXcd::Identity(config.K, config.K);
        if ((gram - target).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, e))
            throw std::invalid_argument("estimate_direct_multi: pilot rows must be orthogonal with energy tau1 * p_u");

        SystemConfig c = config;
        c.tau1 = static_cast<int>(pilots.cols());
        if (e == 0.0)
            return {Eigen::MatrixXcd::Zero(c.M, c.K), static_cast<double>(c.K) * c.M * c.beta_d};
        const double den = c.beta_d * c.tau1 * (c.p_u + v_u_of(c)) + v_b_direct(c) + c.sigma2_b;
        return {(c.beta_d / den) * (Y_I * pilots.adjoint()), direct_mse_multi(c)};
    }

    // ---- second phase ----

    double phase2_bs_distortion(const SystemConfig &c)
    {
        return c.kappa_b * (c.p_u + v_u_of(c)) * (c.beta_d + c.N * c.beta_r);
    }

    Eigen::MatrixXcd phase2_noise_covariance(const Eigen::MatrixXcd &Phi, double eps_I, const SystemConfig &c)
    {
        if (Phi.rows() != c.N)
            throw std::invalid_argument("phase2_noise_covariance: Phi must have N rows");
        const double v_u = v_u_of(c);
        const double m_beta_r = c.M * c.beta_r;
        const double white = v_u * c.M * c.beta_d + c.M * phase2_bs_distortion(c) +
                             static_cast<double>(Phi.cols()) * c.p_u * eps_I + c.M * c.sigma2_b;
        Eigen::VectorXd d = (Phi.cwiseAbs2().colwise().sum().transpose() * (v_u * m_beta_r)).array() + white;
        return d.cast<cd>().asDiagonal();
    }

    CascadeEstimator::CascadeEstimator(const Eigen::MatrixXcd &Phi, double eps_I, const SystemConfig &c)
    {
        if (Phi.rows() != c.N || Phi.cols() < c.N)
            throw std::invalid_argument("CascadeEstimator: Phi must be N x tau2 with tau2 >= N");
        const Eigen::Index N = Phi.rows(), T = Phi.cols();
        const double m_beta_r = c.M * c.beta_r;
        if (N == 0)
        {
            W_.resize(T, 0);
            mse_ = 0.0;
            return;
        }
        // (c Phi^H Phi + D)^-1 Phi^H = D^-1 Phi^H (I + c Phi D^-1 Phi^H)^-1, an N x N solve instead of T x T
        const Eigen::VectorXd d_inv = phase2_noise_covariance(Phi, eps_I, c).diagonal().real().cwiseInverse();
        const Eigen::MatrixXcd DPhiH = d_inv.asDiagonal() * Phi.adjoint();
        Eigen::MatrixXcd S = (c.p_u * m_beta_r) * (Phi * DPhiH);
        S.diagonal().array() += 1.0;
        const Eigen::MatrixXcd X =
            solve_hpd(S, DPhiH.adjoint(), "CascadeEstimator").adjoint(); // A^-1 Phi^H, [T x N]
        W_ = (std::sqrt(c.p_u) * m_beta_r) * X;
        const double captured = c.p_u * m_beta_r * m_beta_r * (Phi * X).trace().real();
        mse_ = std::max(0.0, static_cast<double>(N) * m_beta_r - captured);
    }

    Eigen::MatrixXcd CascadeEstimator::apply(const Eigen::MatrixXcd &Y2_tilde) const
    {
        if (Y2_tilde.cols() != W_.rows())
            throw std::invalid_argument("CascadeEstimator::apply: Y2 must have tau2 columns");
        return Y2_tilde * W_;
    }

    double cascade_mse_trace(const Eigen::MatrixXcd &Phi, double eps_I, const SystemConfig &config)
    {
        return CascadeEstimator(Phi, eps_I, config).mse();
    }

    double cascade_mse_simplified(double eps_I, const SystemConfig &c)
    {
        const double psi = (1.0 / c.M) / (v_u_of(c) * (c.beta_d + c.N * c.beta_r) + phase2_bs_distortion(c) +
                                          c.tau2 * c.p_u * eps_I / c.M + c.sigma2_b);
        return c.M * c.N * c.beta_r / (1.0 + c.p_u * psi * c.tau2 * c.M * c.beta_r);
    }

    CascadeEstimate estimate_cascade_single(const Eigen::MatrixXcd &Y2_tilde, const PilotPlan &plan, double eps_I,
                                            const SystemConfig &config)
    {
        if (Y2_tilde.rows() != config.M)
            throw std::invalid_argument("estimate_cascade_single: Y2 must have M rows");
        SystemConfig c = config;
        c.tau2 = static_cast<int>(plan.Phi_II.cols());
        CascadeEstimator est(plan.Phi_II, eps_I, c);
        return {est.apply(Y2_tilde), est.mse(), cascade_mse_simplified(eps_I, c)};
    }

    // ---- third phase ----

    Eigen::MatrixXcd phase3_noise_covariance(const Eigen::MatrixXcd &G1, const Eigen::MatrixXcd &C, double eps_I_multi,
                                             const SystemConfig &c)
    {
        const double v_u = v_u_of(c);
        const double white = v_b_direct(c) + c.sigma2_b + (c.p_u + v_u) * eps_I_multi / (c.K * c.M);
        Eigen::MatrixXcd Psi = v_u * (G1 * C * G1.adjoint());
        Psi.diagonal().array() += white;
        return Psi;
    }

    Eigen::MatrixXcd phase3_active_columns(const Eigen::MatrixXcd &H_hat_user1, const Phase3Slot &slot)
    {
        const auto M = H_hat_user1.rows();
        if (slot.elements.empty() || static_cast<Eigen::Index>(slot.elements.size()) > M)
            throw std::invalid_argument("phase3: a slot must switch on between 1 and M elements");
        Eigen::MatrixXcd G1(M, static_cast<Eigen::Index>(slot.elements.size()));
        for (std::size_t i = 0; i < slot.elements.size(); ++i)
        {
            const int n = slot.elements[i];
            if (n < 0 || n >= H_hat_user1.cols())
                throw std::invalid_argument("phase3: element index out of range");
            G1.col(static_cast<Eigen::Index>(i)) = H_hat_user1.col(n);
        }
        return G1;
    }

    Eigen::VectorXcd cancel_direct_phase3(const Eigen::VectorXcd &y, const Eigen::VectorXcd &h_d_hat,
                                          const SystemConfig &config)
    {
        return y - std::sqrt(config.p_u) * h_d_hat;
    }

    LambdaEstimate estimate_lambda_multi(const Eigen::VectorXcd &y_tilde, const Phase3Slot &slot,
                                         const Eigen::MatrixXcd &H_hat_user1, double eps_I_multi,
                                         const SystemConfig &config, double prior_scale)
    {
        if (H_hat_user1.rows() != config.M || y_tilde.size() != config.M)
            throw std::invalid_argument("estimate_lambda_multi: expected M-row inputs");
        if (!(prior_scale > 0.0))
            throw std::invalid_argument("estimate_lambda_multi: prior scale must be positive");
        const Eigen::MatrixXcd G1 = phase3_active_columns(H_hat_user1, slot);
        const auto D = G1.cols();
        const Eigen::MatrixXcd C = prior_scale * Eigen::MatrixXcd::Identity(D, D);

        Eigen::MatrixXcd A = config.p_u * (G1 * C * G1.adjoint()) + phase3_noise_covariance(G1, C, eps_I_multi, config);
        Eigen::MatrixXcd X = solve_hpd(A, G1, "estimate_lambda_multi"); // A^-1 G1
        LambdaEstimate out;
        out.lambda_hat = std::sqrt(config.p_u) * (C * (X.adjoint() * y_tilde));
        Eigen::MatrixXcd captured = config.p_u * (C * (G1.adjoint() * X) * C);
        out.mse = std::max(0.0, (C - captured).trace().real());
        return out;
    }

    ErrorFloors error_floors(const SystemConfig &c)
    {
        if (c.tau1 < 1 || c.tau2 < 1)
            throw std::invalid_argument("error_floors: tau1 and tau2 must be >= 1");
        const double kap = c.kappa_u + c.kappa_b + c.kappa_u * c.kappa_b;
        ErrorFloors f;
        f.mu_I = c.beta_d - c.tau1 * c.beta_d / (c.tau1 + kap);
        f.mu_II = c.beta_r - c.tau2 * c.beta_r * c.beta_r /
                                 (kap * (c.beta_d + c.N * c.beta_r) + c.tau2 * f.mu_I + c.tau2 * c.beta_r);
        f.mu_I = std::max(0.0, f.mu_I);
        f.mu_II = std::max(0.0, f.mu_II);
        return f;
    }

    // ---- signal synthesis ----

    Eigen::MatrixXcd synthesize_phase1(const Eigen::VectorXcd &h_d, const Eigen::VectorXcd &pilots,
                                       const SystemConfig &c, RandomStream &rng)
    {
        const Eigen::Index M = h_d.size(), T = pilots.size();
        const double v_u = v_u_of(c);
        const double scale_b = c.kappa_b * (c.p_u + v_u);
        Eigen::MatrixXcd Y(M, T);
        for (Eigen::Index t = 0; t < T; ++t)
        {
            const cd tx = pilots[t] + rng.complex_normal(v_u);
            for (Eigen::Index m = 0; m < M; ++m)
                Y(m, t) = h_d[m] * tx + rng.complex_normal(scale_b * std::norm(h_d[m])) +
                          rng.complex_normal(c.sigma2_b);
        }
        return Y;
    }

    Eigen::MatrixXcd synthesize_phase1_multi(const Eigen::MatrixXcd &h_d, const Eigen::MatrixXcd &pilots,
                                             const SystemConfig &c, RandomStream &rng)
    {
        if (h_d.cols() != pilots.rows())
            throw std::invalid_argument("synthesize_phase1_multi: one pilot row per user required");
        const Eigen::Index M = h_d.rows(), K = h_d.cols(), T = pilots.cols();
        const double v_u = v_u_of(c);
        const double scale_b = c.kappa_b * (c.p_u + v_u);
        const Eigen::VectorXd power = h_d.cwiseAbs2().rowwise().sum();
        Eigen::MatrixXcd Y(M, T);
        for (Eigen::Index t = 0; t < T; ++t)
        {
            Eigen::VectorXcd tx(K);
            for (Eigen::Index k = 0; k < K; ++k)
                tx[k] = pilots(k, t) + rng.complex_normal(v_u);
            Y.col(t) = h_d * tx;
            for (Eigen::Index m = 0; m < M; ++m)
                Y(m, t) += rng.complex_normal(scale_b * power[m]) + rng.complex_normal(c.sigma2_b);
        }
        return Y;
    }

    Eigen::VectorXcd synthesize_phase3(const Eigen::MatrixXcd &G1, const Eigen::VectorXcd &lambda, double eps_I_multi,
                                       const SystemConfig &c, RandomStream &rng)
    {
        const Eigen::Index M = G1.rows();
        const double v_u = v_u_of(c);
        const double residue = (c.p_u + v_u) * eps_I_multi / (c.K * c.M);
        const cd tx = std::sqrt(c.p_u) + rng.complex_normal(v_u);
        Eigen::VectorXcd y = tx * (G1 * lambda);
        for (Eigen::Index m = 0; m < M; ++m)
            y[m] += rng.complex_normal(residue) + rng.complex_normal(v_b_direct(c)) + rng.complex_normal(c.sigma2_b);
        return y;
    }

    EstimationReport run_single_user_estimation(const ChannelRealization &real, const PilotPlan &plan,
                                                const SystemConfig &config, RandomStream &rng, DirectResidue residue,
                                                const CascadeEstimator *estimator)
    {
        if (real.M() != config.M || real.N() != config.N)
            throw std::invalid_argument("run_single_user_estimation: realization does not match the configuration");
        const Eigen::Index M = config.M, N = config.N, T2 = plan.Phi_II.cols();
        const double sp = std::sqrt(config.p_u);
        const double v_u = v_u_of(config);

        EstimationReport rep;
        const Eigen::VectorXcd a1 = plan.pilots_phase1.row(0).transpose();
        const DirectEstimate d = estimate_direct_single(synthesize_phase1(real.h_d, a1, config, rng), a1, config);
        rep.h_d_hat = d.h_d_hat;
        rep.eps_I = d.mse;
        rep.err_I = (d.h_d_hat - real.h_d).squaredNorm();

        // Second phase: the reference user repeats sqrt(p_u) while the surface steps through Phi_II
        const Eigen::MatrixXcd H_all = real.H_R * plan.Phi_II + real.h_d * Eigen::RowVectorXcd::Ones(T2);
        const double scale_b = config.kappa_b * (config.p_u + v_u);
        const double residue_var = static_cast<double>(T2) * config.p_u * d.mse / M;
        Eigen::MatrixXcd Y2(M, T2);
        for (Eigen::Index t = 0; t < T2; ++t)
        {
            const cd tx = sp + rng.complex_normal(v_u);
            for (Eigen::Index m = 0; m < M; ++m)
            {
                cd y = H_all(m, t) * tx + rng.complex_normal(scale_b * std::norm(H_all(m, t))) +
                       rng.complex_normal(config.sigma2_b);
                if (residue == DirectResidue::modeled)
                    y += -sp * real.h_d[m] + rng.complex_normal(residue_var);
                else
                    y -= sp * d.h_d_hat[m];
                Y2(m, t) = y;
            }
        }
        if (estimator)
        {
            rep.H_hat = estimator->apply(Y2);
            rep.eps_II = estimator->mse();
        }
        else
        {
            const CascadeEstimate ce = estimate_cascade_single(Y2, plan, d.mse, config);
            rep.H_hat = ce.H_hat;
            rep.eps_II = ce.mse;
        }
        rep.err_II = N > 0 ? (rep.H_hat - real.H_R).squaredNorm() : 0.0;
        if (config.tau1 >= 1 && config.tau2 >= 1)
            rep.floors = error_floors(config);
        return rep;
    }
}
