#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "rffmd/density.hpp"
#include "rffmd/dynamics.hpp"
#include "rffmd/frequency_training.hpp"
#include "rffmd/langevin.hpp"
#include "rffmd/loss.hpp"
#include "rffmd/potential.hpp"

namespace rffmd {

/// Flat "key=value" text; '#' starts a comment, blank lines are ignored.
class KeyValueConfig {
public:
    static KeyValueConfig parse(const std::string& text, const std::string& origin = "<string>");
    static KeyValueConfig load(const std::filesystem::path& path);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    /// Overlays every entry of `other` on top of this config.
    void merge(const KeyValueConfig& other);

    const std::string& get(const std::string& key) const;
    double get_double(const std::string& key) const;
    long get_long(const std::string& key) const;
    std::vector<double> get_doubles(const std::string& key) const;
    std::vector<long> get_longs(const std::string& key) const;
    std::vector<std::string> get_strings(const std::string& key) const;

    const std::map<std::string, std::string>& entries() const { return values_; }
    /// Sorted "key=value" lines.
    std::string echo() const;

private:
    std::map<std::string, std::string> values_;
};

enum class Profile { Desk, Paper };
Profile parse_profile(const std::string& s);
std::string to_string(Profile p);

/// Every recognised key with its default for the given profile.
KeyValueConfig default_config(Profile profile);

struct ObservableSettings {
    double beta = 1.0;
    double dtau = 0.1;
    double tau_max = 2.0;
    std::size_t M = std::size_t{1} << 16;      ///< surrogate samples, total over replicas
    std::size_t M_ref = std::size_t{1} << 18;  ///< reference samples, total over replicas
    double dt = 5e-3;
    int chains = 64;
    std::vector<ObservablePair> pairs;
};

struct ExperimentConfig {
    Profile profile = Profile::Desk;
    std::uint64_t seed = 0;
    std::filesystem::path out_dir;
    std::filesystem::path models_dir;

    TargetParams potential;
    LangevinConfig langevin;  ///< dt, burn-in, thinning shared by all chains
    std::vector<double> betas;
    std::vector<double> fractions;
    double single_beta = 1.0;

    std::vector<long> K_list;
    std::vector<long> J_list;
    int Q = 8;
    std::vector<FrequencyMethod> methods;

    RegularizationParams reg;
    bool theory_scaling = false;

    TrainingConfig training;  ///< method/outer_steps overridden per study
    int am_steps = 200;
    int gd_steps = 500;
    FrequencyMethod train_method = FrequencyMethod::AdaptiveMetropolis;
    long train_K = 256;
    long train_J = 10000;
    std::string train_plan = "hybrid";
    std::filesystem::path train_data;

    ObservableSettings corr;
    std::vector<long> corr_K;
    long corr_J = 10000;

    std::vector<long> compare_K;
    long compare_J = 10000;
    FrequencyMethod compare_method = FrequencyMethod::GradientDescent;

    std::vector<long> amp_K;
    long amp_J = 10000;
    std::vector<double> amp_c_tilde;
    FrequencyMethod amp_method = FrequencyMethod::AdaptiveMetropolis;

    GridSpec density_grid;
    /// Lattice size for the total-variation comparison of frequency densities.
    int density_tv_n = 32;
    QuadratureSpec quadrature;
    long density_K = 256;
    long density_J = 10000;

    long reconstruct_K = 256;
    long reconstruct_J = 10000;
    FrequencyMethod reconstruct_method = FrequencyMethod::AdaptiveMetropolis;
    double reconstruct_extent = 5.0;
    int reconstruct_points = 101;
    std::filesystem::path reconstruct_model;

    long trace_K = 256;
    long trace_J = 10000;

    /// The effective key=value configuration this struct was built from.
    KeyValueConfig source;

    SamplingPlan hybrid_plan() const;
    SamplingPlan single_plan() const;
    SamplingPlan plan(const std::string& name) const;
    RegularizationParams regularization(long K, long J) const;
    TrainingConfig training_for(FrequencyMethod method) const;
};

/// Profile defaults, overlaid with `overrides`. Unknown keys and malformed
/// values raise ConfigError.
ExperimentConfig make_experiment_config(Profile profile, const KeyValueConfig& overrides);

} // namespace rffmd
