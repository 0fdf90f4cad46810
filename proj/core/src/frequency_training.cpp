#include "rffmd/frequency_training.hpp"

#include <cmath>
#include <limits>

#include <fmt/core.h>

#include "rffmd/amplitude_solvers.hpp"
#include "rffmd/errors.hpp"
#include "rffmd/normal_equations.hpp"

namespace rffmd {

std::string to_string(FrequencyMethod m) {
    return m == FrequencyMethod::AdaptiveMetropolis ? "AM" : "GD";
}

FrequencyMethod parse_frequency_method(const std::string& s) {
    if (s == "AM" || s == "am" || s == "AdaptiveMetropolis") return FrequencyMethod::AdaptiveMetropolis;
    if (s == "GD" || s == "gd" || s == "GradientDescent") return FrequencyMethod::GradientDescent;
    throw ConfigError("unknown frequency method '" + s + "' (expected AM or GD)");
}

std::string to_string(AmplitudeSolver s) { return s == AmplitudeSolver::Ridge ? "ridge" : "proximal"; }

AmplitudeSolver parse_amplitude_solver(const std::string& s) {
    if (s == "ridge" || s == "Ridge") return AmplitudeSolver::Ridge;
    if (s == "proximal" || s == "Proximal") return AmplitudeSolver::Proximal;
    throw ConfigError("unknown amplitude solver '" + s + "' (expected ridge or proximal)");
}

void TrainingConfig::validate() const {
    if (outer_steps < 1) throw ConfigError("training: outer_steps must be >= 1");
    if (!(proposal_scale >= 0.0) || !std::isfinite(proposal_scale))
        throw ConfigError("training: proposal_scale must be finite and >= 0");
    if (!(acceptance_exponent >= 0.0) || !std::isfinite(acceptance_exponent))
        throw ConfigError("training: acceptance_exponent must be finite and >= 0");
    if (!(omega_learning_rate >= 0.0) || !std::isfinite(omega_learning_rate))
        throw ConfigError("training: omega learning rate must be finite and >= 0");
    if (eta_inner_steps < 0) throw ConfigError("training: eta_inner_steps must be >= 0");
}

LossVariant solver_variant(AmplitudeSolver s) {
    return s == AmplitudeSolver::Ridge ? LossVariant::R1 : LossVariant::R3;
}

namespace {

constexpr RidgeOptions kTrainingRidge{.eigen_floor_fallback = true};

Eigen::VectorXcd fit_from_normal_equations(const NormalEquations& ne, const RegularizationParams& r,
                                           AmplitudeSolver solver, int inner_steps,
                                           const std::optional<Eigen::VectorXcd>& warm) {
    if (solver == AmplitudeSolver::Ridge) return solve_ridge(ne, r.lambda1, kTrainingRidge);
    ProximalOptions opts;
    opts.steps = inner_steps;
    opts.initial = warm ? *warm : solve_ridge(ne, r.lambda1, kTrainingRidge);
    return minimize_proximal(ne, r, opts).amps;
}

double training_objective(const NormalEquations& ne, const RegularizationParams& r,
                          const Eigen::VectorXcd& eta, LossVariant variant) {
    return ne.loss(eta) + penalty(eta, r, variant);
}

struct AmOutcome {
    FourierFeatureModel model;
    NormalEquations normal_equations;
};

// `current` holds the normal equations of m's frequencies when the caller has them.
AmOutcome am_step(const FourierFeatureModel& m, const Dataset& data, const RegularizationParams& r,
                  const TrainingConfig& cfg, Rng& rng, const NormalEquations* current) {
    if (!(cfg.proposal_scale >= 0.0)) throw InvalidArgument("adaptive Metropolis: negative proposal scale");
    const Eigen::Index K = m.size();
    const Eigen::Index d = m.dim();

    std::normal_distribution<double> normal;
    Eigen::MatrixXd proposal = m.freqs();
    for (Eigen::Index k = 0; k < K; ++k)
        for (Eigen::Index a = 0; a < d; ++a) proposal(k, a) += cfg.proposal_scale * normal(rng);

    NormalEquations ne_prop = build_normal_equations(proposal, data, r);
    const Eigen::VectorXcd eta_prop = solve_ridge(ne_prop, r.lambda1, kTrainingRidge);

    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    Eigen::MatrixXd accepted = m.freqs();
    Eigen::Index n_accepted = 0;
    for (Eigen::Index k = 0; k < K; ++k) {
        const double p = acceptance_probability(std::abs(eta_prop[k]), std::abs(m.amps()[k]),
                                                cfg.acceptance_exponent);
        if (uniform(rng) < p) {
            accepted.row(k) = proposal.row(k);
            ++n_accepted;
        }
    }

    if (n_accepted == K) return {FourierFeatureModel(std::move(proposal), eta_prop), std::move(ne_prop)};
    if (n_accepted == 0) {
        NormalEquations ne = current ? *current : build_normal_equations(m.freqs(), data, r);
        return {m, std::move(ne)};
    }
    NormalEquations ne = build_normal_equations(accepted, data, r);
    Eigen::VectorXcd eta = solve_ridge(ne, r.lambda1, kTrainingRidge);
    return {FourierFeatureModel(std::move(accepted), std::move(eta)), std::move(ne)};
}

} // namespace

Eigen::VectorXcd fit_amplitudes(const Eigen::MatrixXd& freqs, const Dataset& data,
                                const RegularizationParams& r, AmplitudeSolver solver,
                                int inner_steps, const std::optional<Eigen::VectorXcd>& warm) {
    r.validate();
    return fit_from_normal_equations(build_normal_equations(freqs, data, r), r, solver, inner_steps, warm);
}

Eigen::MatrixXd initial_frequencies(Eigen::Index K, Eigen::Index d, std::uint64_t seed) {
    if (K < 1 || d < 1) throw InvalidArgument("initial_frequencies: K and d must be positive");
    Rng rng = make_rng(derive_seed(seed, "init-freqs"));
    std::normal_distribution<double> normal;
    Eigen::MatrixXd w(K, d);
    for (Eigen::Index k = 0; k < K; ++k)
        for (Eigen::Index a = 0; a < d; ++a) w(k, a) = normal(rng);
    return w;
}

FourierFeatureModel initial_model(Eigen::Index K, Eigen::Index d, std::uint64_t seed) {
    return FourierFeatureModel(initial_frequencies(K, d, seed), Eigen::VectorXcd::Zero(K));
}

double acceptance_probability(double new_abs, double old_abs, double exponent) {
    if (exponent == 0.0 || old_abs == 0.0) return 1.0;
    if (new_abs >= old_abs) return 1.0;
    return std::pow(new_abs / old_abs, exponent);
}

FourierFeatureModel adaptive_metropolis_step(const FourierFeatureModel& m, const Dataset& data,
                                             const RegularizationParams& r,
                                             const TrainingConfig& cfg, Rng& rng) {
    return am_step(m, data, r, cfg, rng, nullptr).model;
}

FourierFeatureModel gradient_descent_step(const FourierFeatureModel& m, const Dataset& data,
                                          const RegularizationParams& r,
                                          const TrainingConfig& cfg) {
    if (cfg.omega_learning_rate == 0.0) return m;
    const Eigen::MatrixXd g = loss_gradient_freqs(m, data, r);
    return m.with_freqs(m.freqs() - cfg.omega_learning_rate * g);
}

TrainingResult train(const FourierFeatureModel& init, const Dataset& data,
                     const RegularizationParams& r, const TrainingConfig& cfg, const Dataset* test) {
    cfg.validate();
    r.validate();
    if (init.dim() != data.dim()) throw InvalidArgument("train: model and data dimensions differ");
    const LossVariant variant = solver_variant(cfg.eta_solver);
    Rng rng = make_rng(derive_seed(cfg.seed, "adaptive-metropolis"));

    NormalEquations ne = build_normal_equations(init.freqs(), data, r);
    FourierFeatureModel ridge_state(init.freqs(), solve_ridge(ne, r.lambda1, kTrainingRidge));
    FourierFeatureModel current = ridge_state.with_amps(
        fit_from_normal_equations(ne, r, cfg.eta_solver, cfg.eta_inner_steps, ridge_state.amps()));

    TrainingResult result{current, {}, 0};
    double best = std::numeric_limits<double>::infinity();
    auto record = [&](int step) {
        TracePoint tp;
        tp.step = step;
        tp.train_loss = training_objective(ne, r, current.amps(), variant);
        if (!std::isfinite(tp.train_loss))
            throw NonFiniteLoss(fmt::format("training loss is not finite at step {}", step));
        if (test) tp.test_loss = empirical_loss(current, *test, r);
        result.trace.push_back(tp);
        if (tp.train_loss < best) {
            best = tp.train_loss;
            result.model = current;
            result.best_step = step;
        }
    };
    record(0);

    for (int step = 1; step <= cfg.outer_steps; ++step) {
        if (cfg.method == FrequencyMethod::AdaptiveMetropolis) {
            AmOutcome out = am_step(ridge_state, data, r, cfg, rng, &ne);
            ridge_state = std::move(out.model);
            ne = std::move(out.normal_equations);
            current = ridge_state.with_amps(fit_from_normal_equations(
                ne, r, cfg.eta_solver, cfg.eta_inner_steps, ridge_state.amps()));
        } else {
            const FourierFeatureModel moved = gradient_descent_step(current, data, r, cfg);
            if (!moved.freqs().allFinite()) throw NonFiniteLoss("gradient descent produced non-finite frequencies");
            ne = build_normal_equations(moved.freqs(), data, r);
            current = moved.with_amps(
                fit_from_normal_equations(ne, r, cfg.eta_solver, cfg.eta_inner_steps, current.amps()));
        }
        record(step);
    }
    return result;
}

} // namespace rffmd
