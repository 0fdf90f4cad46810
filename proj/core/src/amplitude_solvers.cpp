#include "rffmd/amplitude_solvers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <fmt/core.h>

#include "rffmd/errors.hpp"
#include "rffmd/random.hpp"

namespace rffmd {

namespace {

constexpr double kMinRcond = 1e-13;
constexpr double kEigenFloor = 1e-12;
constexpr int kMaxHalvings = 60;

} // namespace

Eigen::VectorXcd solve_ridge(const NormalEquations& ne, double lambda1, RidgeOptions opts) {
    const Eigen::Index K = ne.gram.rows();
    Eigen::MatrixXcd a = ne.gram;
    a.diagonal().array() += lambda1;

    Eigen::LLT<Eigen::MatrixXcd> llt(a);
    if (llt.info() == Eigen::Success && llt.rcond() >= kMinRcond) {
        Eigen::VectorXcd eta = llt.solve(ne.rhs);
        if (eta.allFinite()) return eta;
    }
    if (!opts.eigen_floor_fallback)
        throw SingularSystem(fmt::format("ridge: regularized Gram matrix (K={}) is not positive definite", K));

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(a);
    if (eig.info() != Eigen::Success) throw SingularSystem("ridge: eigendecomposition failed");
    const double floor = std::max(kEigenFloor * a.trace().real() / static_cast<double>(K),
                                  std::numeric_limits<double>::min());
    const Eigen::VectorXd lam = eig.eigenvalues().cwiseMax(floor);
    const Eigen::MatrixXcd& u = eig.eigenvectors();
    Eigen::VectorXcd eta = u * ((u.adjoint() * ne.rhs).array() / lam.array().cast<Complex>()).matrix();
    if (!eta.allFinite()) throw SingularSystem("ridge: fallback produced non-finite amplitudes");
    return eta;
}

Eigen::VectorXcd fit_amplitudes_ridge(const Eigen::MatrixXd& freqs, const Dataset& data,
                                      const RegularizationParams& r, RidgeOptions opts) {
    r.validate();
    return solve_ridge(build_normal_equations(freqs, data, r), r.lambda1, opts);
}

Eigen::VectorXcd budget_prox(const Eigen::VectorXcd& eta, double threshold, double c_tilde) {
    if (!(threshold >= 0.0) || !(c_tilde >= 0.0))
        throw InvalidArgument("budget_prox: threshold and C must be >= 0");
    const Eigen::VectorXd mod = eta.cwiseAbs();
    if (mod.sum() <= c_tilde) return eta;

    auto shrunk_sum = [&](double theta) { return (mod.array() - theta).cwiseMax(0.0).sum(); };
    double theta = threshold;
    if (shrunk_sum(threshold) < c_tilde) {
        // Kink of the hinge: find theta in [0, threshold) with shrunk_sum(theta) = C.
        std::vector<double> sorted(mod.data(), mod.data() + mod.size());
        std::sort(sorted.begin(), sorted.end(), std::greater<>());
        double cumulative = 0.0;
        theta = 0.0;
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            cumulative += sorted[i];
            const double candidate = (cumulative - c_tilde) / static_cast<double>(i + 1);
            const double next = i + 1 < sorted.size() ? sorted[i + 1] : 0.0;
            if (candidate >= next) {
                theta = candidate;
                break;
            }
        }
        theta = std::clamp(theta, 0.0, threshold);
    }

    Eigen::VectorXcd out(eta.size());
    for (Eigen::Index k = 0; k < eta.size(); ++k) {
        const double m = mod[k];
        out[k] = m > theta ? eta[k] * ((m - theta) / m) : Complex(0.0, 0.0);
    }
    return out;
}

double power_iteration(const Eigen::MatrixXcd& a, int iterations) {
    const Eigen::Index n = a.rows();
    if (n == 0) return 0.0;
    Rng rng(0x5eedULL);
    std::normal_distribution<double> normal;
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = Complex(normal(rng), normal(rng));
    v.normalize();
    double lambda = 0.0;
    for (int it = 0; it < std::max(iterations, 1); ++it) {
        Eigen::VectorXcd w = a * v;
        lambda = v.dot(w).real();
        const double norm = w.norm();
        if (!(norm > 0.0)) return 0.0;
        v = w / norm;
    }
    return std::max(lambda, v.dot(a * v).real());
}

double smooth_objective(const NormalEquations& ne, const RegularizationParams& r,
                        const Eigen::VectorXcd& eta) {
    const double s = eta.squaredNorm();
    return ne.loss(eta) + r.lambda1 * s + r.lambda2 * s * s;
}

double r3_objective(const NormalEquations& ne, const RegularizationParams& r,
                    const Eigen::VectorXcd& eta) {
    return smooth_objective(ne, r, eta) + r.lambda3 * std::max(eta.cwiseAbs().sum() - r.c_tilde, 0.0);
}

ProximalResult minimize_proximal(const NormalEquations& ne, const RegularizationParams& r,
                                 const ProximalOptions& opts) {
    r.validate();
    if (opts.steps < 0) throw InvalidArgument("proximal: steps must be >= 0");
    if (!(opts.step_size >= 0.0)) throw InvalidArgument("proximal: step size must be >= 0");
    const Eigen::Index K = ne.gram.rows();

    Eigen::VectorXcd x = opts.initial ? *opts.initial : Eigen::VectorXcd::Zero(K);
    if (x.size() != K) throw InvalidArgument("proximal: initial amplitudes have wrong size");

    double t = opts.step_size;
    if (t == 0.0) {
        const double s0 = x.squaredNorm();
        const double lip = 2.0 * power_iteration(ne.gram, opts.power_iterations) + 2.0 * r.lambda1 +
                           12.0 * r.lambda2 * s0;
        t = lip > 0.0 ? 0.9 / lip : 1.0;
    }

    auto gradient = [&](const Eigen::VectorXcd& eta) -> Eigen::VectorXcd {
        const double s = eta.squaredNorm();
        return 2.0 * (ne.gram * eta - ne.rhs) + (2.0 * r.lambda1 + 4.0 * r.lambda2 * s) * eta;
    };

    ProximalResult res;
    double fx = r3_objective(ne, r, x);
    if (!std::isfinite(fx)) throw NonFiniteLoss("proximal: objective is not finite at the initial point");
    res.loss_trace.push_back(fx);

    Eigen::VectorXcd y = x;
    double momentum = 1.0;
    for (int step = 0; step < opts.steps; ++step) {
        const double fy = smooth_objective(ne, r, y);
        const Eigen::VectorXcd gy = gradient(y);
        Eigen::VectorXcd z;
        double fz = 0.0;
        int halvings = 0;
        for (;; t *= 0.5, ++halvings) {
            if (halvings > kMaxHalvings)
                throw NonFiniteLoss(fmt::format("proximal: no admissible step at iteration {}", step));
            z = budget_prox(y - t * gy, t * r.lambda3, r.c_tilde);
            const double fz_smooth = smooth_objective(ne, r, z);
            if (!std::isfinite(fz_smooth)) continue;
            const Eigen::VectorXcd diff = z - y;
            const double model = fy + gy.dot(diff).real() + diff.squaredNorm() / (2.0 * t);
            if (fz_smooth <= model + 1e-12 * std::abs(model)) {
                fz = fz_smooth + r.lambda3 * std::max(z.cwiseAbs().sum() - r.c_tilde, 0.0);
                break;
            }
        }

        const double next_momentum = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
        const Eigen::VectorXcd x_prev = x;
        const double f_prev = fx;
        if (fz <= fx) {
            x = z;
            fx = fz;
        }
        y = x + (momentum / next_momentum) * (z - x) + ((momentum - 1.0) / next_momentum) * (x - x_prev);
        momentum = next_momentum;
        res.loss_trace.push_back(fx);

        if (opts.relative_tolerance > 0.0 && f_prev - fx <= opts.relative_tolerance * std::abs(f_prev)) break;
    }
    res.amps = std::move(x);
    res.step_size = t;
    return res;
}

ProximalResult fit_amplitudes_proximal(const Eigen::MatrixXd& freqs, const Dataset& data,
                                       const RegularizationParams& r, int steps, double step_size,
                                       std::optional<Eigen::VectorXcd> initial) {
    r.validate();
    ProximalOptions opts;
    opts.steps = steps;
    opts.step_size = step_size;
    opts.initial = std::move(initial);
    return minimize_proximal(build_normal_equations(freqs, data, r), r, opts);
}

} // namespace rffmd
