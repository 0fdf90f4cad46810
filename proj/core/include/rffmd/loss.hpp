#pragma once

#include <Eigen/Core>

#include "rffmd/dataset.hpp"
#include "rffmd/rff_model.hpp"

namespace rffmd {

/// Weights of the regularized objective
///   L = (1/J) sum_j [a1 |v_j - vbar(x_j)|^2 + a2 |grad v_j - grad vbar(x_j)|^2]
///       + l1 sum|eta|^2 + l2 (sum|eta|^2)^2 + l3 max(sum|eta| - C, 0).
struct RegularizationParams {
    double alpha1 = 1.0;
    double alpha2 = 1.0;
    double lambda1 = 1e-2;
    double lambda2 = 1e-3;
    double lambda3 = 1e-2;
    double c_tilde = 100.0;

    void validate() const;

    /// lambda1 = K J^-1/2, lambda2 = K^2 J^-1/2, lambda3 = 1 (theory scaling).
    static RegularizationParams theory_scaling(Eigen::Index K, Eigen::Index J,
                                               double alpha1 = 1.0, double alpha2 = 1.0,
                                               double c_tilde = 100.0);
};

/// Cumulative loss variants: R1 adds the Tikhonov term, R2 also the quartic
/// term, R3 also the amplitude-budget hinge.
enum class LossVariant { R1, R2, R3 };

struct AmplitudeSums {
    double l1 = 0.0;   ///< sum_k |eta_k|
    double l2sq = 0.0; ///< sum_k |eta_k|^2
};

AmplitudeSums amplitude_sums(const Eigen::VectorXcd& amps);
inline AmplitudeSums amplitude_sums(const FourierFeatureModel& m) { return amplitude_sums(m.amps()); }

/// Data-fit part only.
double empirical_loss(const FourierFeatureModel& m, const Dataset& d, const RegularizationParams& r);

double penalty(const Eigen::VectorXcd& amps, const RegularizationParams& r, LossVariant variant);

double regularized_loss(const FourierFeatureModel& m, const Dataset& d, const RegularizationParams& r,
                        LossVariant variant);

/// Gradient of the smooth objective (empirical + R1 [+ R2]) with respect to
/// (Re eta, Im eta), packed as dL/dRe + i dL/dIm. R3 is rejected because the
/// hinge is not differentiable at the kink.
Eigen::VectorXcd loss_gradient_amps(const FourierFeatureModel& m, const Dataset& d,
                                    const RegularizationParams& r, LossVariant variant);

/// Gradient of the empirical loss with respect to the frequencies (K x d).
/// The penalties do not depend on omega.
Eigen::MatrixXd loss_gradient_freqs(const FourierFeatureModel& m, const Dataset& d,
                                    const RegularizationParams& r);

} // namespace rffmd
