#include "rffmd/potential.hpp"

#include "rffmd/errors.hpp"

namespace rffmd {

SmoothCutoff::SmoothCutoff(double radius, double delta) : radius_(radius), delta_(delta) {
    if (!(radius > 0.0) || !(delta > 0.0))
        throw InvalidArgument("SmoothCutoff: radius and delta must be positive");
}

TargetPotential::TargetPotential(const TargetParams& params)
    : params_(params),
      chi_a_(params.radius_a, params.delta_a),
      chi_c_(params.radius_c, params.delta_c),
      chi_b_(params.radius_b, params.delta_b) {}

double TargetPotential::value(const Vec2& x) const {
    const double x1 = x[0], x2 = x[1];
    return 0.5 * x1 * x1 + 0.5 * params_.alpha * x2 * x2 +
           params_.gamma * std::sin(x1 * x2) * chi_a_.value(x);
}

ValueGrad TargetPotential::value_grad(const Vec2& x) const {
    const double x1 = x[0], x2 = x[1];
    const double r = x.norm();
    const double ca = chi_a_.at_radius(r);
    const double s = std::sin(x1 * x2);
    const double c = std::cos(x1 * x2);

    ValueGrad out;
    out.value = 0.5 * x1 * x1 + 0.5 * params_.alpha * x2 * x2 + params_.gamma * s * ca;
    out.grad[0] = x1 + params_.gamma * c * x2 * ca;
    out.grad[1] = params_.alpha * x2 + params_.gamma * c * x1 * ca;
    if (r > chi_a_.radius()) out.grad += (params_.gamma * s * chi_a_.radial_derivative(r) / r) * x;
    return out;
}

ValueGrad TargetPotential::inner(const Vec2& x) const {
    ValueGrad vg = value_grad(x);
    const double r = x.norm();
    const double cc = chi_c_.at_radius(r);
    ValueGrad out;
    out.value = vg.value * cc;
    out.grad = vg.grad * cc;
    if (r > chi_c_.radius()) out.grad += (vg.value * chi_c_.radial_derivative(r) / r) * x;
    return out;
}

ReconstructedPotential::ReconstructedPotential(FourierFeatureModel model, TargetPotential target)
    : ReconstructedPotential(std::move(model), target, target.chi_b()) {}

ReconstructedPotential::ReconstructedPotential(FourierFeatureModel model, TargetPotential target,
                                               SmoothCutoff cutoff)
    : model_(std::move(model)), target_(std::move(target)), cutoff_(cutoff) {
    if (model_.dim() != 2) throw InvalidArgument("ReconstructedPotential: model must be 2-D");
}

ValueGrad ReconstructedPotential::value_grad(const Vec2& x) const {
    ValueGrad outer = target_.value_grad(x);
    const double r = x.norm();
    const double cb = cutoff_.at_radius(r);
    if (cb == 0.0) return outer;

    const ValueGrad net = model_.eval_real(x);
    ValueGrad out;
    out.value = cb * net.value + (1.0 - cb) * outer.value;
    out.grad = cb * net.grad + (1.0 - cb) * outer.grad;
    if (r > cutoff_.radius()) {
        const Vec2 gb = (cutoff_.radial_derivative(r) / r) * x;
        out.grad += (net.value - outer.value) * gb;
    }
    return out;
}

double gibbs_log_density(const Potential& pot, const Vec2& x, double beta) {
    if (!(beta > 0.0)) throw InvalidArgument("gibbs_log_density: beta must be positive");
    return -beta * pot.value(x);
}

} // namespace rffmd
