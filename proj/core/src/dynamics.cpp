#include "rffmd/dynamics.hpp"

#include <cmath>

#include <fmt/core.h>

#include "rffmd/csv.hpp"
#include "rffmd/errors.hpp"
#include "rffmd/parallel.hpp"
#include "rffmd/stats.hpp"

namespace rffmd {

PhaseState verlet_step(const PhaseState& z, const Potential& pot, double dt) {
    if (!(dt > 0.0)) throw InvalidArgument("verlet: dt must be > 0");
    PhaseState out;
    const Vec2 p_half = z.p - 0.5 * dt * pot.grad(z.x);
    out.x = z.x + dt * p_half;
    out.p = p_half - 0.5 * dt * pot.grad(out.x);
    if (!is_finite(out)) throw NonFiniteState("verlet: state left the finite range");
    return out;
}

double hamiltonian(const Potential& pot, const PhaseState& z) {
    return 0.5 * z.p.squaredNorm() + pot.value(z.x);
}

std::string to_string(Observable o) {
    switch (o) {
    case Observable::X1: return "x1";
    case Observable::X2: return "x2";
    case Observable::P1: return "p1";
    case Observable::P2: return "p2";
    case Observable::Zero: return "zero";
    }
    return "?";
}

Observable parse_observable(const std::string& s) {
    for (Observable o : {Observable::X1, Observable::X2, Observable::P1, Observable::P2, Observable::Zero})
        if (s == to_string(o)) return o;
    throw ConfigError("unknown observable '" + s + "'");
}

double observe(Observable o, const PhaseState& z) {
    switch (o) {
    case Observable::X1: return z.x[0];
    case Observable::X2: return z.x[1];
    case Observable::P1: return z.p[0];
    case Observable::P2: return z.p[1];
    case Observable::Zero: return 0.0;
    }
    return 0.0;
}

ObservablePair ObservablePair::parse(const std::string& s) {
    for (Observable a : {Observable::X1, Observable::X2, Observable::P1, Observable::P2, Observable::Zero}) {
        const std::string head = to_string(a);
        if (s.rfind(head, 0) == 0) return {a, parse_observable(s.substr(head.size()))};
    }
    throw ConfigError("unknown observable pair '" + s + "'");
}

std::vector<double> tau_grid(double dtau, double tau_max) {
    if (!(dtau > 0.0) || !(tau_max >= 0.0)) throw InvalidArgument("tau grid: need dtau > 0 and tau_max >= 0");
    const long n = std::lround(tau_max / dtau);
    if (std::abs(n * dtau - tau_max) > 1e-9 * std::max(1.0, tau_max))
        throw InvalidArgument("tau grid: tau_max is not a multiple of dtau");
    std::vector<double> taus(static_cast<std::size_t>(n) + 1);
    for (long i = 0; i <= n; ++i) taus[static_cast<std::size_t>(i)] = static_cast<double>(i) * dtau;
    return taus;
}

void CorrelationCurve::validate() const {
    if (values.size() != taus.size() || half_widths.size() != taus.size())
        throw InvalidArgument("correlation curve: column lengths differ");
    if (taus.empty() || taus.front() != 0.0) throw InvalidArgument("correlation curve: taus must start at 0");
    for (std::size_t i = 1; i < taus.size(); ++i)
        if (!(taus[i] > taus[i - 1])) throw InvalidArgument("correlation curve: taus must increase");
}

namespace {

std::vector<long> step_indices(const std::vector<double>& taus, double dt) {
    if (taus.empty() || taus.front() != 0.0) throw InvalidArgument("correlation: tau grid must start at 0");
    std::vector<long> steps(taus.size());
    for (std::size_t i = 0; i < taus.size(); ++i) {
        steps[i] = std::lround(taus[i] / dt);
        if (std::abs(steps[i] * dt - taus[i]) > 1e-9 * std::max(1.0, taus[i]))
            throw InvalidArgument(fmt::format("correlation: tau={} is not a multiple of dt={}", taus[i], dt));
        if (i > 0 && steps[i] <= steps[i - 1]) throw InvalidArgument("correlation: taus must increase");
    }
    return steps;
}

} // namespace

std::vector<CorrelationCurve> estimate_correlations(const Potential& pot,
                                                    std::span<const ObservablePair> obs,
                                                    double beta, const std::vector<double>& taus,
                                                    std::size_t M, std::uint64_t seed,
                                                    const CorrelationSettings& settings) {
    if (M < 2) throw InvalidArgument("correlation: M must be >= 2");
    if (obs.empty()) throw InvalidArgument("correlation: no observables");
    const std::vector<long> steps = step_indices(taus, settings.dt);
    const std::size_t T = taus.size();
    const std::size_t P = obs.size();

    LangevinConfig sampler = settings.sampler;
    sampler.seed = seed;
    const InitialPhase init = sample_initial_phase(pot, beta, M, sampler, settings.chains);
    const auto C = static_cast<std::size_t>(init.chains);
    const std::size_t active = std::min(C, M);

    // Per-chain sums of A(z_tau) B(z_0), indexed [chain][pair * T + i].
    std::vector<std::vector<CompensatedSum>> chain_sums(active, std::vector<CompensatedSum>(P * T));
    std::vector<std::vector<CompensatedSum>> chain_sq(active, std::vector<CompensatedSum>(P * T));
    std::vector<std::size_t> chain_counts(active, 0);
    const double dt = settings.dt;
    const double half_dt = 0.5 * dt;
    parallel_for(active, [&](std::size_t c) {
        std::vector<double> b0(P);
        for (std::size_t m = c; m < M; m += C) {
            PhaseState z = init.states[m];
            for (std::size_t p = 0; p < P; ++p) b0[p] = observe(obs[p].b, z);
            // Same arithmetic as verlet_step, reusing the force between steps.
            Vec2 force = pot.grad(z.x);
            long done = 0;
            for (std::size_t i = 0; i < T; ++i) {
                for (; done < steps[i]; ++done) {
                    const Vec2 p_half = z.p - half_dt * force;
                    z.x = z.x + dt * p_half;
                    force = pot.grad(z.x);
                    z.p = p_half - half_dt * force;
                    if (!is_finite(z)) throw NonFiniteState("verlet: state left the finite range");
                }
                for (std::size_t p = 0; p < P; ++p) {
                    const double s = observe(obs[p].a, z) * b0[p];
                    chain_sums[c][p * T + i] += s;
                    chain_sq[c][p * T + i] += s * s;
                }
            }
            ++chain_counts[c];
        }
    });

    const double dM = static_cast<double>(M);
    std::vector<CorrelationCurve> curves(P);
    for (std::size_t p = 0; p < P; ++p) {
        CorrelationCurve& curve = curves[p];
        curve.taus = taus;
        curve.values.resize(T);
        curve.half_widths.resize(T);
        for (std::size_t i = 0; i < T; ++i) {
            CompensatedSum total;
            for (std::size_t c = 0; c < active; ++c) total += chain_sums[c][p * T + i].value();
            const double mu = total.value() / dM;
            double var_of_mean = 0.0;
            if (active >= 2) {
                CompensatedSum acc;
                for (std::size_t c = 0; c < active; ++c) {
                    const double nc = static_cast<double>(chain_counts[c]);
                    const double dev = chain_sums[c][p * T + i].value() / nc - mu;
                    acc += (nc / dM) * (nc / dM) * dev * dev;
                }
                var_of_mean = acc.value() * static_cast<double>(active) / static_cast<double>(active - 1);
            } else {
                const double mean_sq = chain_sq[0][p * T + i].value() / dM;
                var_of_mean = std::max(mean_sq - mu * mu, 0.0) * dM / (dM - 1.0) / dM;
            }
            curve.values[i] = mu;
            curve.half_widths[i] = kZ95 * std::sqrt(var_of_mean);
        }
    }
    return curves;
}

CorrelationCurve estimate_correlation(const Potential& pot, ObservablePair obs, double beta,
                                      const std::vector<double>& taus, std::size_t M,
                                      std::uint64_t seed, const CorrelationSettings& settings) {
    const ObservablePair pairs[] = {obs};
    return estimate_correlations(pot, pairs, beta, taus, M, seed, settings).front();
}

double l1_curve_difference(const CorrelationCurve& c1, const CorrelationCurve& c2) {
    if (c1.taus.size() != c2.taus.size()) throw GridMismatch("L1 difference: tau grids differ in length");
    if (c1.taus.size() < 2) throw GridMismatch("L1 difference: need at least two grid points");
    for (std::size_t i = 0; i < c1.taus.size(); ++i)
        if (std::abs(c1.taus[i] - c2.taus[i]) > 1e-12) throw GridMismatch("L1 difference: tau grids differ");
    if (c1.values.size() != c1.taus.size() || c2.values.size() != c2.taus.size())
        throw InvalidArgument("L1 difference: malformed curve");
    const double dtau = c1.taus[1] - c1.taus[0];
    CompensatedSum s;
    for (std::size_t i = 0; i < c1.taus.size(); ++i) s += std::abs(c1.values[i] - c2.values[i]);
    return s.value() * dtau;
}

void save_curve_csv(const std::filesystem::path& path, const CorrelationCurve& curve) {
    curve.validate();
    CsvWriter w(path, {"tau", "value", "ci_half_width"});
    for (std::size_t i = 0; i < curve.size(); ++i)
        w.field(curve.taus[i]).field(curve.values[i]).field(curve.half_widths[i]).end_row();
}

CorrelationCurve load_curve_csv(const std::filesystem::path& path) {
    const CsvTable t = read_csv(path);
    CorrelationCurve c;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        c.taus.push_back(t.number(r, "tau"));
        c.values.push_back(t.number(r, "value"));
        c.half_widths.push_back(t.number(r, "ci_half_width"));
    }
    c.validate();
    return c;
}

std::string curve_filename(const ObservablePair& obs, const std::string& pot, long K, long J) {
    return fmt::format("corr_{}_{}_K{}_J{}.csv", obs.name(), pot, K, J);
}

} // namespace rffmd
