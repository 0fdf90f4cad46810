#pragma once

#include <Eigen/Core>

#include "rffmd/dataset.hpp"
#include "rffmd/loss.hpp"

namespace rffmd {

/// Quadratic form of the empirical loss in the amplitudes:
///   loss(eta) = eta^H G eta - 2 Re(b^H eta) + c
/// with G_kl = (1/J) sum_j conj(phi_jk) phi_jl (a1 + a2 omega_k . omega_l),
///      b_k  = (1/J) sum_j conj(phi_jk) (a1 v_j - i a2 omega_k . grad v_j),
///      c    = (1/J) sum_j (a1 v_j^2 + a2 |grad v_j|^2),
/// and phi_jk = exp(i omega_k . x_j). G carries no regularization.
struct NormalEquations {
    Eigen::MatrixXcd gram;
    Eigen::VectorXcd rhs;
    double data_constant = 0.0;

    double loss(const Eigen::VectorXcd& eta) const;
};

/// Assembles the normal equations over fixed data partitions that are summed
/// in index order, so the result does not depend on the worker count.
NormalEquations build_normal_equations(const Eigen::MatrixXd& freqs, const Dataset& data,
                                       const RegularizationParams& r);

/// Feature block phi_jk = exp(i omega_k . x_j) for rows [begin, end).
Eigen::MatrixXcd feature_block(const Eigen::MatrixXd& freqs, const Eigen::MatrixXd& points,
                               Eigen::Index begin, Eigen::Index end);

/// vbar and grad vbar at every data point; used for residuals and losses.
struct NetworkOutputs {
    Eigen::VectorXcd values;  ///< J
    Eigen::MatrixXcd grads;   ///< J x d
};
NetworkOutputs evaluate_on_data(const Eigen::MatrixXd& freqs, const Eigen::VectorXcd& amps,
                                const Eigen::MatrixXd& points);

} // namespace rffmd
