#include "rffmd/loss.hpp"

#include <cmath>

#include "rffmd/errors.hpp"
#include "rffmd/normal_equations.hpp"

namespace rffmd {

void RegularizationParams::validate() const {
    auto nonneg = [](double x, const char* name) {
        if (!(x >= 0.0) || !std::isfinite(x))
            throw ConfigError(std::string("regularization: ") + name + " must be finite and >= 0");
    };
    nonneg(alpha1, "alpha1");
    nonneg(alpha2, "alpha2");
    nonneg(lambda1, "lambda1");
    nonneg(lambda2, "lambda2");
    nonneg(lambda3, "lambda3");
    nonneg(c_tilde, "C");
    if (alpha1 == 0.0 && alpha2 == 0.0) throw ConfigError("regularization: alpha1 and alpha2 both zero");
}

RegularizationParams RegularizationParams::theory_scaling(Eigen::Index K, Eigen::Index J,
                                                          double alpha1, double alpha2,
                                                          double c_tilde) {
    const double k = static_cast<double>(K);
    const double root_j = std::sqrt(static_cast<double>(J));
    RegularizationParams r;
    r.alpha1 = alpha1;
    r.alpha2 = alpha2;
    r.lambda1 = k / root_j;
    r.lambda2 = k * k / root_j;
    r.lambda3 = 1.0;
    r.c_tilde = c_tilde;
    return r;
}

AmplitudeSums amplitude_sums(const Eigen::VectorXcd& amps) {
    AmplitudeSums s;
    s.l1 = amps.cwiseAbs().sum();
    s.l2sq = amps.squaredNorm();
    return s;
}

namespace {

struct Residuals {
    Eigen::VectorXcd values; // vbar - v
    Eigen::MatrixXcd grads;  // grad vbar - grad v
};

Residuals residuals(const FourierFeatureModel& m, const Dataset& d) {
    if (m.dim() != d.dim()) throw InvalidArgument("model and data dimensions differ");
    NetworkOutputs out = evaluate_on_data(m.freqs(), m.amps(), d.points());
    out.values -= d.values().cast<Complex>();
    out.grads -= d.grads().cast<Complex>();
    return {std::move(out.values), std::move(out.grads)};
}

} // namespace

double empirical_loss(const FourierFeatureModel& m, const Dataset& d, const RegularizationParams& r) {
    const Residuals res = residuals(m, d);
    const double total = r.alpha1 * res.values.squaredNorm() + r.alpha2 * res.grads.squaredNorm();
    return total / static_cast<double>(d.size());
}

double penalty(const Eigen::VectorXcd& amps, const RegularizationParams& r, LossVariant variant) {
    const AmplitudeSums s = amplitude_sums(amps);
    double p = r.lambda1 * s.l2sq;
    if (variant != LossVariant::R1) p += r.lambda2 * s.l2sq * s.l2sq;
    if (variant == LossVariant::R3) p += r.lambda3 * std::max(s.l1 - r.c_tilde, 0.0);
    return p;
}

double regularized_loss(const FourierFeatureModel& m, const Dataset& d, const RegularizationParams& r,
                        LossVariant variant) {
    return empirical_loss(m, d, r) + penalty(m.amps(), r, variant);
}

Eigen::VectorXcd loss_gradient_amps(const FourierFeatureModel& m, const Dataset& d,
                                    const RegularizationParams& r, LossVariant variant) {
    if (variant == LossVariant::R3)
        throw InvalidArgument("loss_gradient_amps: R3 is not differentiable");
    const Residuals res = residuals(m, d);
    const Eigen::Index K = m.size();
    const Eigen::Index dim = m.dim();
    const Eigen::Index J = d.size();

    // (2/J) sum_j conj(phi_jk) [a1 r_j - i a2 omega_k . g_j]
    Eigen::MatrixXcd rhs(J, dim + 1);
    rhs.col(0) = res.values;
    rhs.rightCols(dim) = res.grads;
    Eigen::MatrixXcd proj = Eigen::MatrixXcd::Zero(K, dim + 1);
    const Eigen::Index block = 1024;
    for (Eigen::Index b = 0; b < J; b += block) {
        const Eigen::Index e = std::min(b + block, J);
        proj.noalias() += feature_block(m.freqs(), d.points(), b, e).adjoint() * rhs.middleRows(b, e - b);
    }
    Eigen::VectorXcd grad_term = Eigen::VectorXcd::Zero(K);
    for (Eigen::Index a = 0; a < dim; ++a)
        grad_term += (m.freqs().col(a).cast<Complex>().array() * proj.col(a + 1).array()).matrix();
    Eigen::VectorXcd g =
        (r.alpha1 * proj.col(0) - Complex(0.0, r.alpha2) * grad_term) * (2.0 / static_cast<double>(J));

    const double s = m.amps().squaredNorm();
    double scale = 2.0 * r.lambda1;
    if (variant == LossVariant::R2) scale += 4.0 * r.lambda2 * s;
    g += scale * m.amps();
    return g;
}

Eigen::MatrixXd loss_gradient_freqs(const FourierFeatureModel& m, const Dataset& d,
                                    const RegularizationParams& r) {
    const Residuals res = residuals(m, d);
    const Eigen::Index K = m.size();
    const Eigen::Index dim = m.dim();
    const Eigen::Index J = d.size();
    const Eigen::MatrixXd& x = d.points();

    // dL/domega_ka = (2/J) Re{ i eta_k sum_j phi_jk [a1 x_ja conj(r_j) + a2 conj(g_ja)
    //                                                + i a2 x_ja (omega_k . conj(g_j))] }
    // Columns: [a1 x_a conj(r) + a2 conj(g_a)] for each a, then x_a conj(g_b) for each (a, b).
    const Eigen::Index ncol = dim + dim * dim;
    Eigen::MatrixXcd rhs(J, ncol);
    const Eigen::VectorXcd cr = res.values.conjugate();
    const Eigen::MatrixXcd cg = res.grads.conjugate();
    for (Eigen::Index a = 0; a < dim; ++a) {
        rhs.col(a) = r.alpha1 * (x.col(a).cast<Complex>().array() * cr.array()).matrix() + r.alpha2 * cg.col(a);
        for (Eigen::Index b = 0; b < dim; ++b)
            rhs.col(dim + a * dim + b) = (x.col(a).cast<Complex>().array() * cg.col(b).array()).matrix();
    }

    Eigen::MatrixXcd proj = Eigen::MatrixXcd::Zero(K, ncol);
    const Eigen::Index block = 1024;
    for (Eigen::Index b = 0; b < J; b += block) {
        const Eigen::Index e = std::min(b + block, J);
        proj.noalias() += feature_block(m.freqs(), x, b, e).transpose() * rhs.middleRows(b, e - b);
    }

    const Complex I(0.0, 1.0);
    Eigen::MatrixXd grad(K, dim);
    for (Eigen::Index k = 0; k < K; ++k) {
        for (Eigen::Index a = 0; a < dim; ++a) {
            Complex inner = proj(k, a);
            Complex cross = 0.0;
            for (Eigen::Index b = 0; b < dim; ++b) cross += m.freqs()(k, b) * proj(k, dim + a * dim + b);
            inner += I * r.alpha2 * cross;
            grad(k, a) = (I * m.amps()[k] * inner).real() * 2.0 / static_cast<double>(J);
        }
    }
    return grad;
}

} // namespace rffmd
