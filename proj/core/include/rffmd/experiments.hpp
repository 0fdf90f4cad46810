#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rffmd/config.hpp"
#include "rffmd/density.hpp"
#include "rffmd/frequency_training.hpp"
#include "rffmd/stats.hpp"

namespace rffmd {

// Each study writes its CSV artifacts and a manifest into cfg.out_dir and
// returns the numbers it wrote. Seeds derive from cfg.seed as
// study -> replica -> chain -> trajectory. Trained models are cached as model
// files under cfg.models_dir, keyed by everything that determines them, so
// studies that need the same replica models share them.

struct SampleDataResult {
    std::filesystem::path train_path;
};
SampleDataResult run_sample_data(const ExperimentConfig& cfg);

struct TrainResult {
    std::filesystem::path model_path;
    TrainingResult training;
};
TrainResult run_train(const ExperimentConfig& cfg);

struct GeneralizationRow {
    FrequencyMethod method;
    long K = 0;
    long J = 0;
    ReplicaStats loss;
};
/// Test loss of models trained per (method, K, J) over Q replicas.
/// generalization.csv: method,K,J,loss_mean,ci_half_width
std::vector<GeneralizationRow> run_generalization_study(const ExperimentConfig& cfg);

struct ReconstructionSummary {
    std::filesystem::path csv;
    std::size_t points = 0;
    double max_diff_inner = 0.0;    ///< max |V - v_r| over |x| <= 2
    double max_diff_shell = 0.0;    ///< over 3 <= |x| <= 4
    double max_diff_outside = 0.0;  ///< where chi_b underflows to 0
};
/// reconstruction.csv: x1,x2,V,vr,diff on a lattice over [-extent, extent]^2.
ReconstructionSummary run_reconstruction(const ExperimentConfig& cfg);

struct L1Row {
    std::string label;  ///< method ("AM"/"GD") or plan ("single"/"hybrid")
    long K = 0;
    std::string observable;
    ReplicaStats l1;
};

struct CorrelationStudyResult {
    std::vector<L1Row> rows;
    std::vector<std::filesystem::path> curve_files;
};
/// Reference curves under V and surrogate curves under v_r per (method, K);
/// correlation_l1.csv: method,K,observable,l1_error,ci_half_width
CorrelationStudyResult run_correlation_study(const ExperimentConfig& cfg);

/// sampling_comparison.csv: plan,K,observable,l1_error,ci_half_width
std::vector<L1Row> run_sampling_comparison(const ExperimentConfig& cfg);

struct AmplitudeRow {
    std::string variant;  ///< R1, R2, R3
    double c_tilde = 0.0;
    long K = 0;
    double sum_abs = 0.0;
    double sum_sq = 0.0;
};
/// amplitudes.csv: variant,c_tilde,K,sum_abs,sum_sq (replica means)
std::vector<AmplitudeRow> run_amplitude_diagnostics(const ExperimentConfig& cfg);

struct FrequencyDensityResult {
    DensityGrid optimal;
    std::vector<std::pair<std::string, DensityGrid>> empirical;  ///< "AM", "GD", "init"
    std::vector<std::pair<std::string, double>> tv;              ///< TV to the optimal density
    double tv_of(const std::string& name) const;
};
/// empirical_density_<method>.csv, empirical_density_init.csv,
/// optimal_density.csv and density_tv.csv on a shared lattice.
FrequencyDensityResult run_frequency_density(const ExperimentConfig& cfg);

struct TraceRow {
    FrequencyMethod method;
    int step = 0;
    double test_loss = 0.0;
};
/// training_trace.csv: method,step,test_loss (replica mean)
std::vector<TraceRow> run_training_trace(const ExperimentConfig& cfg);

} // namespace rffmd
