#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "rffmd/dataset.hpp"
#include "rffmd/loss.hpp"
#include "rffmd/normal_equations.hpp"

namespace rffmd {

struct RidgeOptions {
    /// On a failed Cholesky factorization, solve with eigenvalues floored at
    /// 1e-12 trace/K instead of throwing SingularSystem.
    bool eigen_floor_fallback = false;
};

/// argmin_eta empirical_loss + lambda1 sum|eta_k|^2 via the K x K complex
/// normal equations. Throws SingularSystem if the regularized Gram matrix is
/// not positive definite (unless the fallback is enabled).
Eigen::VectorXcd fit_amplitudes_ridge(const Eigen::MatrixXd& freqs, const Dataset& data,
                                      const RegularizationParams& r, RidgeOptions opts = {});
Eigen::VectorXcd solve_ridge(const NormalEquations& ne, double lambda1, RidgeOptions opts = {});

/// Exact proximal map of eta -> t lambda3 max(sum|eta_k| - C, 0), with
/// `threshold` = t lambda3. Moduli are soft-thresholded by a common theta,
/// phases are kept.
Eigen::VectorXcd budget_prox(const Eigen::VectorXcd& eta, double threshold, double c_tilde);

/// Largest eigenvalue of a Hermitian positive semidefinite matrix.
double power_iteration(const Eigen::MatrixXcd& a, int iterations);

struct ProximalOptions {
    int steps = 500;
    /// Initial step; 0 selects 0.9 / L with L from power iteration.
    double step_size = 0.0;
    int power_iterations = 20;
    /// Starting amplitudes; zeros when absent.
    std::optional<Eigen::VectorXcd> initial;
    /// Stop once an accepted step improves the objective by less than this
    /// (relative). 0 runs all steps.
    double relative_tolerance = 0.0;
};

struct ProximalResult {
    Eigen::VectorXcd amps;
    /// Objective after each iteration, starting with the initial point.
    std::vector<double> loss_trace;
    double step_size = 0.0;
};

/// Monotone accelerated proximal gradient on the R3 objective: the empirical
/// loss plus the lambda1 and lambda2 terms are the smooth part, the budget
/// hinge is handled through budget_prox. Throws NonFiniteLoss if the
/// objective cannot be kept finite.
ProximalResult fit_amplitudes_proximal(const Eigen::MatrixXd& freqs, const Dataset& data,
                                       const RegularizationParams& r, int steps, double step_size,
                                       std::optional<Eigen::VectorXcd> initial = std::nullopt);
ProximalResult minimize_proximal(const NormalEquations& ne, const RegularizationParams& r,
                                 const ProximalOptions& opts);

/// Smooth part and full R3 objective from precomputed normal equations.
double smooth_objective(const NormalEquations& ne, const RegularizationParams& r,
                        const Eigen::VectorXcd& eta);
double r3_objective(const NormalEquations& ne, const RegularizationParams& r,
                    const Eigen::VectorXcd& eta);

} // namespace rffmd
