// rffmd: runs the surrogate-potential studies and writes CSV artifacts.

#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "rffmd/config.hpp"
#include "rffmd/errors.hpp"
#include "rffmd/experiments.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kNumericError = 3;

using Runner = std::function<void(const rffmd::ExperimentConfig&)>;

void print_l1(const std::vector<rffmd::L1Row>& rows) {
    for (const auto& r : rows)
        fmt::print("{:>7} K={:<5} {:<5} l1={:.6g} +- {:.3g}\n", r.label, r.K, r.observable, r.l1.mean,
                   r.l1.half_width);
}

std::map<std::string, Runner> runners() {
    using namespace rffmd;
    return {
        {"sample-data",
         [](const ExperimentConfig& c) {
             const auto r = run_sample_data(c);
             fmt::print("wrote {}\n", r.train_path.string());
         }},
        {"train",
         [](const ExperimentConfig& c) {
             const auto r = run_train(c);
             const auto& best = r.training.trace[static_cast<std::size_t>(r.training.best_step)];
             fmt::print("best step {} train_loss={:.6g} test_loss={:.6g}\nwrote {}\n", best.step,
                        best.train_loss, best.test_loss.value_or(0.0), r.model_path.string());
         }},
        {"generalization",
         [](const ExperimentConfig& c) {
             for (const auto& r : run_generalization_study(c))
                 fmt::print("{} K={:<5} J={:<7} loss={:.6g} +- {:.3g}\n", to_string(r.method), r.K, r.J,
                            r.loss.mean, r.loss.half_width);
         }},
        {"reconstruct",
         [](const ExperimentConfig& c) {
             const auto s = run_reconstruction(c);
             fmt::print("{} points; max|diff| inner={:.4g} shell={:.4g} outside={:.3g}\nwrote {}\n", s.points,
                        s.max_diff_inner, s.max_diff_shell, s.max_diff_outside, s.csv.string());
         }},
        {"correlation", [](const ExperimentConfig& c) { print_l1(run_correlation_study(c).rows); }},
        {"sampling-compare", [](const ExperimentConfig& c) { print_l1(run_sampling_comparison(c)); }},
        {"amplitudes",
         [](const ExperimentConfig& c) {
             for (const auto& r : run_amplitude_diagnostics(c))
                 fmt::print("{} C={:<5g} K={:<5} sum_abs={:.6g} sum_sq={:.6g}\n", r.variant, r.c_tilde, r.K,
                            r.sum_abs, r.sum_sq);
         }},
        {"freq-density",
         [](const ExperimentConfig& c) {
             for (const auto& [name, tv] : run_frequency_density(c).tv)
                 fmt::print("TV({}, optimal) = {:.6g}\n", name, tv);
         }},
        {"training-trace",
         [](const ExperimentConfig& c) {
             const auto rows = run_training_trace(c);
             fmt::print("{} trace rows written\n", rows.size());
         }},
    };
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random Fourier feature surrogate potentials: training, sampling and correlation studies"};
    app.require_subcommand(1, 1);

    std::string config_path;
    std::string profile = "desk";
    std::optional<unsigned long long> seed;
    std::optional<std::string> out_dir;

    const auto table = runners();
    for (const auto& [name, runner] : table) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "key=value configuration file")->required()->check(CLI::ExistingFile);
        sub->add_option("--profile", profile, "desk or paper defaults")->check(CLI::IsMember({"desk", "paper"}));
        sub->add_option("--seed", seed, "base seed (overrides run.seed)");
        sub->add_option("--out", out_dir, "output directory (overrides run.out)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kConfigError;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    try {
        rffmd::KeyValueConfig overrides = rffmd::KeyValueConfig::load(config_path);
        if (seed) overrides.set("run.seed", std::to_string(*seed));
        if (out_dir) overrides.set("run.out", *out_dir);
        const auto cfg = rffmd::make_experiment_config(rffmd::parse_profile(profile), overrides);
        table.at(name)(cfg);
    } catch (const rffmd::ConfigError& e) {
        fmt::print(stderr, "config error: {}\n", e.what());
        return kConfigError;
    } catch (const rffmd::NumericError& e) {
        fmt::print(stderr, "numeric failure: {}\n", e.what());
        return kNumericError;
    } catch (const rffmd::ReplicaError& e) {
        fmt::print(stderr, "{}\n", e.what());
        return e.numeric() ? kNumericError : 1;
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 1;
    }
    return 0;
}
