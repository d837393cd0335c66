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
#ifndef IRS_ESTIMATION_HPP
#define IRS_ESTIMATION_HPP

#include <vector>

#include <Eigen/Dense>

#include "irs/config.hpp"
#include "irs/random.hpp"
#include "irs/system_model.hpp"

namespace irs
{
    // One third-phase slot: which user sends its pilot and which elements are switched on
    struct Phase3Slot
    {
        int user = 1;              // 0-based; user 0 is the reference user and never appears
        std::vector<int> elements; // 0-based element indices, at most M of them
    };

    struct PilotPlan
    {
        int tau1 = 0, tau2 = 0, tau3 = 0;
        double pilot_power = 0.0;
        Eigen::MatrixXcd pilots_phase1; // [K x tau1], orthogonal rows with energy tau1 * p_u
        Eigen::MatrixXcd Phi_II;        // [N x tau2], first N rows of the tau2-point DFT
        std::vector<Phase3Slot> phase3_schedule;
    };

    // First N rows of the tau2-point DFT matrix (unit-modulus entries)
    Eigen::MatrixXcd dft_pilot_matrix(int N, int tau2);

    // K orthogonal constant-modulus pilot rows of length tau1, each with energy tau1 * p_u
    Eigen::MatrixXcd orthogonal_pilots(int K, int tau1, double p_u);

    // Users 1..K-1 each get ceil(N/M) slots; every element is switched on in exactly one of them
    std::vector<Phase3Slot> phase3_schedule(int K, int N, int M);

    PilotPlan make_pilot_plan(const SystemConfig &config);

    // ---- first phase: direct channel ----

    struct DirectEstimate
    {
        Eigen::VectorXcd h_d_hat;
        double mse = 0.0; // total over the M entries
    };

    double direct_mse_single(const SystemConfig &config);
    // Scalar weight applied to Y_I * conj(pilots)
    double direct_gain_single(const SystemConfig &config);
    DirectEstimate estimate_direct_single(const Eigen::MatrixXcd &Y_I, const Eigen::VectorXcd &pilots,
                                          const SystemConfig &config);

    struct MultiDirectEstimate
    {
        Eigen::MatrixXcd h_d_hat; // [M x K]
        double mse = 0.0;         // summed over users and entries
    };

    double direct_mse_multi(const SystemConfig &config);
    MultiDirectEstimate estimate_direct_multi(const Eigen::MatrixXcd &Y_I, const Eigen::MatrixXcd &pilots,
                                              const SystemConfig &config);

    // ---- second phase: cascade channel of the reference user ----

    // BS distortion power per antenna while the surface reflects: kappa_b (p_u + v_u)(beta_d + N beta_r)
    double phase2_bs_distortion(const SystemConfig &config);

    // [tau2 x tau2] covariance of the residual noise after cancelling the direct path
    Eigen::MatrixXcd phase2_noise_covariance(const Eigen::MatrixXcd &Phi, double eps_I, const SystemConfig &config);

    // Linear cascade estimator H_hat = Y2 * W; building it once lets Monte Carlo loops reuse W
    class CascadeEstimator
    {
    public:
        CascadeEstimator(const Eigen::MatrixXcd &Phi, double eps_I, const SystemConfig &config);

        Eigen::MatrixXcd apply(const Eigen::MatrixXcd &Y2_tilde) const;
        const Eigen::MatrixXcd &weights() const { return W_; } // [tau2 x N]
        double mse() const { return mse_; }                    // trace form, total over M x N entries

    private:
        Eigen::MatrixXcd W_;
        double mse_ = 0.0;
    };

    double cascade_mse_trace(const Eigen::MatrixXcd &Phi, double eps_I, const SystemConfig &config);
    // Closed form valid for a DFT schedule: M N beta_r / (1 + p_u psi tau2 M beta_r)
    double cascade_mse_simplified(double eps_I, const SystemConfig &config);

    struct CascadeEstimate
    {
        Eigen::MatrixXcd H_hat;
        double mse = 0.0;
        double mse_simplified = 0.0;
    };

    CascadeEstimate estimate_cascade_single(const Eigen::MatrixXcd &Y2_tilde, const PilotPlan &plan, double eps_I,
                                            const SystemConfig &config);

    // ---- third phase: ratios lambda_{k,n} = h_{r,k,n} / h_{r,1,n} of the other users ----

    struct LambdaEstimate
    {
        Eigen::VectorXcd lambda_hat; // one entry per switched-on element
        double mse = 0.0;            // trace over the slot's elements
    };

    // [M x M] noise covariance for one slot; G1 holds the reference cascade columns of the active elements
    Eigen::MatrixXcd phase3_noise_covariance(const Eigen::MatrixXcd &G1, const Eigen::MatrixXcd &C, double eps_I_multi,
                                             const SystemConfig &config);

    // Reference cascade columns of the slot's active elements
    Eigen::MatrixXcd phase3_active_columns(const Eigen::MatrixXcd &H_hat_user1, const Phase3Slot &slot);

    // Subtracts the estimated direct path: y - sqrt(p_u) h_d_hat
    Eigen::VectorXcd cancel_direct_phase3(const Eigen::VectorXcd &y, const Eigen::VectorXcd &h_d_hat,
                                          const SystemConfig &config);

    LambdaEstimate estimate_lambda_multi(const Eigen::VectorXcd &y_tilde, const Phase3Slot &slot,
                                         const Eigen::MatrixXcd &H_hat_user1, double eps_I_multi,
                                         const SystemConfig &config, double prior_scale = 1.0);

    // ---- closed-form floors and full single-user pipeline ----

    struct ErrorFloors
    {
        double mu_I = 0.0;  // per entry
        double mu_II = 0.0; // per entry
    };

    ErrorFloors error_floors(const SystemConfig &config);

    // How the imperfect direct-path cancellation enters the second-phase observation
    enum class DirectResidue
    {
        modeled, // white, per-entry variance tau2 p_u eps_I / M, as assumed by the noise covariance
        exact    // (h_d - h_d_hat) a^T, the literal cancellation leftover
    };

    struct EstimationReport
    {
        Eigen::MatrixXcd h_d_hat;    // [M x K]
        Eigen::MatrixXcd H_hat;      // [M x N]
        Eigen::MatrixXcd lambda_hat; // [K-1 x N], empty for a single user
        double eps_I = 0.0, eps_II = 0.0, eps_III = 0.0;
        double err_I = 0.0, err_II = 0.0, err_III = 0.0; // squared errors of this run
        ErrorFloors floors;
    };

    // Synthesizes the first two training phases for one realization and estimates both channels.
    // Phase noise is not applied during training. A prebuilt `estimator` (same Phi, config and
    // first-phase MSE) skips the per-call factorization.
    EstimationReport run_single_user_estimation(const ChannelRealization &real, const PilotPlan &plan,
                                                const SystemConfig &config, RandomStream &rng,
                                                DirectResidue residue = DirectResidue::modeled,
                                                const CascadeEstimator *estimator = nullptr);

    // First-phase observation [M x tau1] for one user, with per-slot distortion
    Eigen::MatrixXcd synthesize_phase1(const Eigen::VectorXcd &h_d, const Eigen::VectorXcd &pilots,
                                       const SystemConfig &config, RandomStream &rng);

    // First-phase observation for K users sending orthogonal pilots, h_d is [M x K]
    Eigen::MatrixXcd synthesize_phase1_multi(const Eigen::MatrixXcd &h_d, const Eigen::MatrixXcd &pilots,
                                             const SystemConfig &config, RandomStream &rng);

    // Third-phase observation after direct-path cancellation, drawn with the modeled noise covariance
    Eigen::VectorXcd synthesize_phase3(const Eigen::MatrixXcd &G1, const Eigen::VectorXcd &lambda, double eps_I_multi,
                                       const SystemConfig &config, RandomStream &rng);
}

#endif
