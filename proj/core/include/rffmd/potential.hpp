#pragma once

#include <cmath>

#include "rffmd/rff_model.hpp"
#include "rffmd/types.hpp"

namespace rffmd {

/// Radial cutoff: 1 inside radius R, Gaussian tail exp(-(|x|-R)^2 / (2 delta)) outside.
///
/// Continuously differentiable at |x| = R with zero one-sided derivatives.
/// The tail is never truncated; it underflows to exactly 0 far out.
class SmoothCutoff {
public:
    SmoothCutoff(double radius, double delta);

    double radius() const noexcept { return radius_; }
    double delta() const noexcept { return delta_; }

    double at_radius(double r) const noexcept {
        if (r <= radius_) return 1.0;
        const double s = r - radius_;
        return std::exp(-s * s / (2.0 * delta_));
    }

    /// d chi / d r.
    double radial_derivative(double r) const noexcept {
        if (r <= radius_) return 0.0;
        const double s = r - radius_;
        return -(s / delta_) * std::exp(-s * s / (2.0 * delta_));
    }

    template <class Derived>
    double value(const Eigen::MatrixBase<Derived>& x) const {
        return at_radius(x.norm());
    }

    /// Gradient; zero for |x| <= R (and at the origin).
    template <class Derived>
    Eigen::Matrix<double, Derived::RowsAtCompileTime, 1> gradient(
        const Eigen::MatrixBase<Derived>& x) const {
        const double r = x.norm();
        if (r <= radius_) return Eigen::Matrix<double, Derived::RowsAtCompileTime, 1>::Zero(x.size());
        return (radial_derivative(r) / r) * x;
    }

private:
    double radius_;
    double delta_;
};

/// Interface for potentials that drive the samplers and the Verlet integrator.
class Potential {
public:
    virtual ~Potential() = default;
    virtual ValueGrad value_grad(const Vec2& x) const = 0;
    virtual double value(const Vec2& x) const { return value_grad(x).value; }
    Vec2 grad(const Vec2& x) const { return value_grad(x).grad; }
};

struct TargetParams {
    double alpha = std::sqrt(2.0);
    double gamma = 2.0;
    double radius_a = 2.0, delta_a = 1.0;
    double radius_c = 4.0, delta_c = 0.2;
    double radius_b = 3.0, delta_b = 0.2;
};

/// The analytic 2-D model
///   V(x) = x1^2/2 + (alpha/2) x2^2 + gamma sin(x1 x2) chi_a(x)
/// with inner part v = V chi_c. chi_b is carried along for reconstruction.
class TargetPotential final : public Potential {
public:
    explicit TargetPotential(const TargetParams& params = {});

    const TargetParams& params() const noexcept { return params_; }
    double alpha() const noexcept { return params_.alpha; }
    double gamma() const noexcept { return params_.gamma; }
    const SmoothCutoff& chi_a() const noexcept { return chi_a_; }
    const SmoothCutoff& chi_c() const noexcept { return chi_c_; }
    const SmoothCutoff& chi_b() const noexcept { return chi_b_; }

    /// V and grad V.
    ValueGrad value_grad(const Vec2& x) const override;
    double value(const Vec2& x) const override;

    /// v = V chi_c and its gradient.
    ValueGrad inner(const Vec2& x) const;

private:
    TargetParams params_;
    SmoothCutoff chi_a_;
    SmoothCutoff chi_c_;
    SmoothCutoff chi_b_;
};

/// Adapter exposing the inner potential v of a target as a Potential.
class InnerPotential final : public Potential {
public:
    explicit InnerPotential(TargetPotential target) : target_(std::move(target)) {}
    ValueGrad value_grad(const Vec2& x) const override { return target_.inner(x); }

private:
    TargetPotential target_;
};

/// v_r(x) = Re(vbar(x) chi_b(x)) + V(x) (1 - chi_b(x)).
///
/// Only the real part of the network enters, so the result and its gradient
/// are real by construction. Where chi_b underflows to 0 the network is not
/// evaluated at all.
class ReconstructedPotential final : public Potential {
public:
    ReconstructedPotential(FourierFeatureModel model, TargetPotential target);
    ReconstructedPotential(FourierFeatureModel model, TargetPotential target, SmoothCutoff cutoff);

    const FourierFeatureModel& model() const noexcept { return model_; }
    const TargetPotential& target() const noexcept { return target_; }
    const SmoothCutoff& cutoff() const noexcept { return cutoff_; }

    ValueGrad value_grad(const Vec2& x) const override;

private:
    FourierFeatureModel model_;
    TargetPotential target_;
    SmoothCutoff cutoff_;
};

/// Unnormalized Gibbs log-density -beta U(x).
double gibbs_log_density(const Potential& pot, const Vec2& x, double beta);

} // namespace rffmd
