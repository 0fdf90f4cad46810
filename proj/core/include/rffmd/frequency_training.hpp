#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "rffmd/dataset.hpp"
#include "rffmd/loss.hpp"
#include "rffmd/random.hpp"
#include "rffmd/rff_model.hpp"

namespace rffmd {

enum class FrequencyMethod { AdaptiveMetropolis, GradientDescent };
enum class AmplitudeSolver { Ridge, Proximal };

std::string to_string(FrequencyMethod m);   ///< "AM" / "GD"
FrequencyMethod parse_frequency_method(const std::string& s);
std::string to_string(AmplitudeSolver s);
AmplitudeSolver parse_amplitude_solver(const std::string& s);

struct TrainingConfig {
    FrequencyMethod method = FrequencyMethod::AdaptiveMetropolis;
    int outer_steps = 200;
    /// Per-component std-dev of the random-walk frequency proposals.
    double proposal_scale = 0.5;
    /// Power on the amplitude ratio in the acceptance probability.
    double acceptance_exponent = 4.0;
    double omega_learning_rate = 1.0;
    AmplitudeSolver eta_solver = AmplitudeSolver::Proximal;
    /// Proximal-gradient iterations per amplitude solve.
    int eta_inner_steps = 200;
    std::uint64_t seed = 0;

    void validate() const;
};

struct TracePoint {
    int step = 0;
    double train_loss = 0.0;            ///< regularized training loss
    std::optional<double> test_loss;    ///< data-fit loss on held-out data
};

struct TrainingResult {
    FourierFeatureModel model;
    std::vector<TracePoint> trace;
    int best_step = 0;
};

/// Regularized-loss variant minimized by a solver: ridge solves R1, the
/// proximal solver R3 (which equals R2 when lambda3 = 0).
LossVariant solver_variant(AmplitudeSolver s);

/// Amplitudes for fixed frequencies with the configured solver. The proximal
/// solver is warm-started from `warm` (or the ridge solution).
Eigen::VectorXcd fit_amplitudes(const Eigen::MatrixXd& freqs, const Dataset& data,
                                const RegularizationParams& r, AmplitudeSolver solver,
                                int inner_steps,
                                const std::optional<Eigen::VectorXcd>& warm = std::nullopt);

/// Frequencies drawn i.i.d. standard normal per component.
Eigen::MatrixXd initial_frequencies(Eigen::Index K, Eigen::Index d, std::uint64_t seed);
FourierFeatureModel initial_model(Eigen::Index K, Eigen::Index d, std::uint64_t seed);

/// min(1, (new_abs / old_abs)^exponent); a zero current amplitude always accepts.
double acceptance_probability(double new_abs, double old_abs, double exponent);

/// One adaptive Metropolis sweep. `m` must carry the ridge amplitudes of its
/// frequencies. Every omega_k gets a Gaussian proposal, the ridge amplitudes
/// of the proposed set are fitted, each proposal is accepted independently
/// with acceptance_probability(|eta'_k|, |eta_k|), and the ridge amplitudes of
/// the accepted set are returned with it.
FourierFeatureModel adaptive_metropolis_step(const FourierFeatureModel& m, const Dataset& data,
                                             const RegularizationParams& r,
                                             const TrainingConfig& cfg, Rng& rng);

/// omega <- omega - lr grad_omega L with the amplitudes of `m` held fixed.
FourierFeatureModel gradient_descent_step(const FourierFeatureModel& m, const Dataset& data,
                                          const RegularizationParams& r,
                                          const TrainingConfig& cfg);

/// Alternates amplitude solves and frequency updates for cfg.outer_steps
/// rounds and returns the model with the lowest regularized training loss.
/// Trace step 0 is the fit of the initial frequencies. Test losses are
/// recorded when `test` is given.
TrainingResult train(const FourierFeatureModel& init, const Dataset& data,
                     const RegularizationParams& r, const TrainingConfig& cfg,
                     const Dataset* test = nullptr);

} // namespace rffmd
