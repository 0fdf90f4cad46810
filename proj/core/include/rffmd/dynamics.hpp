#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "rffmd/langevin.hpp"
#include "rffmd/potential.hpp"
#include "rffmd/types.hpp"

namespace rffmd {

/// Kick-drift-kick velocity Verlet with unit mass.
PhaseState verlet_step(const PhaseState& z, const Potential& pot, double dt);

/// H = |p|^2 / 2 + U(x).
double hamiltonian(const Potential& pot, const PhaseState& z);

enum class Observable { X1, X2, P1, P2, Zero };

std::string to_string(Observable o);
Observable parse_observable(const std::string& s);
double observe(Observable o, const PhaseState& z);

/// C_AB(tau) = E[A(z_tau) B(z_0)].
struct ObservablePair {
    Observable a = Observable::X1;
    Observable b = Observable::X1;

    std::string name() const { return to_string(a) + to_string(b); }
    static ObservablePair parse(const std::string& s);  ///< e.g. "x1x1"
};

/// tau_i = i dtau for i = 0..N with N dtau = tau_max.
std::vector<double> tau_grid(double dtau, double tau_max);

struct CorrelationCurve {
    std::vector<double> taus;
    std::vector<double> values;
    std::vector<double> half_widths;  ///< 95% CI

    std::size_t size() const { return taus.size(); }
    void validate() const;
};

struct CorrelationSettings {
    double dt = 5e-3;          ///< Verlet step
    LangevinConfig sampler;    ///< initial-position chains; beta is overridden
    int chains = 64;
};

/// Monte Carlo estimate of several correlation curves from one set of M
/// trajectories started from Gibbs samples of `pot`. Each trajectory is
/// integrated once to the last tau, recording A at every grid time.
/// Half-widths use chain-level batch means, so they stay honest when samples
/// within a chain are correlated.
std::vector<CorrelationCurve> estimate_correlations(const Potential& pot,
                                                    std::span<const ObservablePair> obs,
                                                    double beta, const std::vector<double>& taus,
                                                    std::size_t M, std::uint64_t seed,
                                                    const CorrelationSettings& settings = {});

CorrelationCurve estimate_correlation(const Potential& pot, ObservablePair obs, double beta,
                                      const std::vector<double>& taus, std::size_t M,
                                      std::uint64_t seed, const CorrelationSettings& settings = {});

/// sum_i |c1_i - c2_i| dtau. Throws GridMismatch unless the tau grids agree.
double l1_curve_difference(const CorrelationCurve& c1, const CorrelationCurve& c2);

/// Columns tau, value, ci_half_width.
void save_curve_csv(const std::filesystem::path& path, const CorrelationCurve& curve);
CorrelationCurve load_curve_csv(const std::filesystem::path& path);

/// corr_<A><B>_<pot>_K<K>_J<J>.csv
std::string curve_filename(const ObservablePair& obs, const std::string& pot, long K, long J);

} // namespace rffmd
