#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "rffmd/dataset.hpp"
#include "rffmd/potential.hpp"
#include "rffmd/random.hpp"
#include "rffmd/types.hpp"

namespace rffmd {

/// Overdamped Langevin dx = -grad U dt + sqrt(2/beta) dW.
struct LangevinConfig {
    double beta = 1.0;
    double dt = 0.01;
    long burn_in = 10000;
    long thinning = 200;
    std::uint64_t seed = 0;

    void validate() const;
};

enum class LangevinScheme {
    LeimkuhlerMatthews,  ///< averaged consecutive noise, one fresh vector per step
    EulerMaruyama,       ///< test mode: plain noise
};

/// x' = x - grad dt + sqrt(2 dt / beta) (xi_prev + xi_next) / 2.
/// Throws NonFiniteState if x' is not finite.
Vec2 langevin_step(const Vec2& x, const Vec2& grad, double beta, double dt, const Vec2& xi_prev,
                   const Vec2& xi_next);

/// A single Langevin chain. In Leimkuhler-Matthews mode a chain of N steps
/// draws exactly N + 1 standard normal vectors: xi_{n+1} of one step is the
/// xi_n of the next.
class LangevinChain {
public:
    LangevinChain(const Potential& pot, const LangevinConfig& cfg, Vec2 start = Vec2::Zero(),
                  LangevinScheme scheme = LangevinScheme::LeimkuhlerMatthews);

    void step();
    void advance(long n);
    /// Runs the configured burn-in.
    void burn_in() { advance(config_.burn_in); }
    /// Advances by the thinning interval and returns the new position.
    const Vec2& next_sample();

    const Vec2& position() const noexcept { return x_; }
    long normals_drawn() const noexcept { return normals_drawn_; }

private:
    Vec2 draw();

    const Potential& pot_;
    LangevinConfig config_;
    LangevinScheme scheme_;
    Rng rng_;
    std::normal_distribution<double> normal_;
    Vec2 x_;
    Vec2 xi_;
    double noise_scale_;
    long normals_drawn_ = 0;
};

struct PlanEntry {
    LangevinConfig config;
    double fraction = 1.0;
};

/// Mixture of Langevin chains, each contributing a fixed fraction of the data.
struct SamplingPlan {
    std::vector<PlanEntry> entries;

    void validate() const;
    /// Default: beta = 1 and beta = 0.3, half of the data each.
    static SamplingPlan hybrid(const LangevinConfig& base = {});
    static SamplingPlan single(double beta, const LangevinConfig& base = {});
    /// Per-entry counts for J points; the last entry absorbs rounding.
    std::vector<std::size_t> counts(std::size_t J) const;
};

/// One chain per plan entry, started at the origin, burned in and thinned.
/// Stores x_j with the inner potential v(x_j) and grad v(x_j), then shuffles
/// the concatenated samples. Chain seeds derive from `seed`.
Dataset sample_dataset(const TargetPotential& target, const SamplingPlan& plan, std::size_t J,
                       std::uint64_t seed);

/// Initial phase-space states for correlation estimates.
///
/// Positions come from `chains` independent Langevin chains under `pot`
/// (trajectory m is sample m / C of chain m % C). Momenta are N(0, I/beta).
/// Chain c uses seeds derived from (cfg.seed, c) only, so two calls with the
/// same seed share noise for their common trajectories.
struct InitialPhase {
    std::vector<PhaseState> states;
    int chains = 1;
    int chain_of(std::size_t m) const { return static_cast<int>(m % static_cast<std::size_t>(chains)); }
};

InitialPhase sample_initial_phase(const Potential& pot, double beta, std::size_t M,
                                  const LangevinConfig& cfg, int chains = 64);

} // namespace rffmd
