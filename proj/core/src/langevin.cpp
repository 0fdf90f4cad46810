#include "rffmd/langevin.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/core.h>

#include "rffmd/errors.hpp"
#include "rffmd/parallel.hpp"

namespace rffmd {

void LangevinConfig::validate() const {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw ConfigError("langevin: beta must be > 0");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("langevin: dt must be > 0");
    if (burn_in < 0) throw ConfigError("langevin: burn_in must be >= 0");
    if (thinning < 1) throw ConfigError("langevin: thinning must be >= 1");
}

Vec2 langevin_step(const Vec2& x, const Vec2& grad, double beta, double dt, const Vec2& xi_prev,
                   const Vec2& xi_next) {
    const Vec2 out = x - grad * dt + std::sqrt(2.0 * dt / beta) * 0.5 * (xi_prev + xi_next);
    if (!is_finite(out))
        throw NonFiniteState(fmt::format("langevin: state left the finite range (dt={})", dt));
    return out;
}

LangevinChain::LangevinChain(const Potential& pot, const LangevinConfig& cfg, Vec2 start,
                             LangevinScheme scheme)
    : pot_(pot), config_(cfg), scheme_(scheme), rng_(cfg.seed), x_(std::move(start)),
      xi_(Vec2::Zero()), noise_scale_(std::sqrt(2.0 * cfg.dt / cfg.beta)) {
    config_.validate();
    if (!is_finite(x_)) throw NonFiniteState("langevin: non-finite start");
    if (scheme_ == LangevinScheme::LeimkuhlerMatthews) xi_ = draw();
}

Vec2 LangevinChain::draw() {
    ++normals_drawn_;
    const double a = normal_(rng_);
    const double b = normal_(rng_);
    return Vec2(a, b);
}

void LangevinChain::step() {
    const Vec2 grad = pot_.grad(x_);
    const Vec2 xi_next = draw();
    if (scheme_ == LangevinScheme::LeimkuhlerMatthews) {
        x_ = langevin_step(x_, grad, config_.beta, config_.dt, xi_, xi_next);
        xi_ = xi_next;
    } else {
        x_ = x_ - grad * config_.dt + noise_scale_ * xi_next;
        if (!is_finite(x_)) throw NonFiniteState("langevin: state left the finite range");
    }
}

void LangevinChain::advance(long n) {
    for (long i = 0; i < n; ++i) step();
}

const Vec2& LangevinChain::next_sample() {
    advance(config_.thinning);
    return x_;
}

void SamplingPlan::validate() const {
    if (entries.empty()) throw ConfigError("sampling plan: no entries");
    double total = 0.0;
    for (const auto& e : entries) {
        e.config.validate();
        if (!(e.fraction >= 0.0)) throw ConfigError("sampling plan: fractions must be >= 0");
        total += e.fraction;
    }
    if (std::abs(total - 1.0) > 1e-9) throw ConfigError(fmt::format("sampling plan: fractions sum to {}, not 1", total));
}

SamplingPlan SamplingPlan::hybrid(const LangevinConfig& base) {
    SamplingPlan plan;
    LangevinConfig cold = base, hot = base;
    cold.beta = 1.0;
    hot.beta = 0.3;
    plan.entries = {{cold, 0.5}, {hot, 0.5}};
    return plan;
}

SamplingPlan SamplingPlan::single(double beta, const LangevinConfig& base) {
    SamplingPlan plan;
    LangevinConfig cfg = base;
    cfg.beta = beta;
    plan.entries = {{cfg, 1.0}};
    return plan;
}

std::vector<std::size_t> SamplingPlan::counts(std::size_t J) const {
    validate();
    std::vector<std::size_t> out(entries.size());
    std::size_t used = 0;
    for (std::size_t i = 0; i + 1 < entries.size(); ++i) {
        out[i] = std::min(J - used, static_cast<std::size_t>(std::floor(entries[i].fraction * J + 1e-9)));
        used += out[i];
    }
    out.back() = J - used;
    return out;
}

Dataset sample_dataset(const TargetPotential& target, const SamplingPlan& plan, std::size_t J,
                       std::uint64_t seed) {
    if (J < 1) throw InvalidArgument("sample_dataset: J must be >= 1");
    const std::vector<std::size_t> counts = plan.counts(J);
    std::vector<std::size_t> offsets(counts.size(), 0);
    std::partial_sum(counts.begin(), counts.end() - 1, offsets.begin() + 1);

    const auto n = static_cast<Eigen::Index>(J);
    Eigen::MatrixXd x(n, 2), g(n, 2);
    Eigen::VectorXd v(n);
    parallel_for(plan.entries.size(), [&](std::size_t e) {
        LangevinConfig cfg = plan.entries[e].config;
        cfg.seed = derive_seed(seed, "dataset-chain", {e});
        LangevinChain chain(target, cfg);
        chain.burn_in();
        for (std::size_t i = 0; i < counts[e]; ++i) {
            const Vec2 p = chain.next_sample();
            const ValueGrad vg = target.inner(p);
            const auto row = static_cast<Eigen::Index>(offsets[e] + i);
            x.row(row) = p.transpose();
            v[row] = vg.value;
            g.row(row) = vg.grad.transpose();
        }
    });

    std::vector<Eigen::Index> order(J);
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    Rng rng = make_rng(derive_seed(seed, "dataset-shuffle"));
    std::shuffle(order.begin(), order.end(), rng);
    Eigen::MatrixXd xs(n, 2), gs(n, 2);
    Eigen::VectorXd vs(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        xs.row(j) = x.row(order[j]);
        vs[j] = v[order[j]];
        gs.row(j) = g.row(order[j]);
    }

    DatasetMeta meta;
    meta.seed = seed;
    for (const auto& e : plan.entries) {
        meta.betas.push_back(e.config.beta);
        meta.fractions.push_back(e.fraction);
    }
    meta.dt = plan.entries.front().config.dt;
    meta.burn_in = plan.entries.front().config.burn_in;
    meta.thinning = plan.entries.front().config.thinning;
    return Dataset(std::move(xs), std::move(vs), std::move(gs), std::move(meta));
}

InitialPhase sample_initial_phase(const Potential& pot, double beta, std::size_t M,
                                  const LangevinConfig& cfg, int chains) {
    if (M < 1) throw InvalidArgument("sample_initial_phase: M must be >= 1");
    if (chains < 1) throw InvalidArgument("sample_initial_phase: need at least one chain");
    LangevinConfig base = cfg;
    base.beta = beta;
    base.validate();

    InitialPhase out;
    out.chains = chains;
    out.states.resize(M);
    const auto C = static_cast<std::size_t>(chains);
    const std::size_t active = std::min(C, M);
    const double p_scale = 1.0 / std::sqrt(beta);
    parallel_for(active, [&](std::size_t c) {
        LangevinConfig chain_cfg = base;
        chain_cfg.seed = derive_seed(cfg.seed, "phase-chain", {c});
        LangevinChain chain(pot, chain_cfg);
        chain.burn_in();
        for (std::size_t m = c; m < M; m += C) {
            PhaseState& z = out.states[m];
            z.x = chain.next_sample();
            Rng rng = make_rng(derive_seed(cfg.seed, "momentum", {m}));
            std::normal_distribution<double> normal;
            const double p1 = normal(rng);
            const double p2 = normal(rng);
            z.p = Vec2(p1, p2) * p_scale;
        }
    });
    return out;
}

} // namespace rffmd
