#include "rffmd/experiments.hpp"

#include <cmath>
#include <map>
#include <optional>

#include <fmt/core.h>

#include "rffmd/amplitude_solvers.hpp"
#include "rffmd/csv.hpp"
#include "rffmd/dynamics.hpp"
#include "rffmd/errors.hpp"
#include "rffmd/langevin.hpp"
#include "rffmd/manifest.hpp"
#include "rffmd/normal_equations.hpp"
#include "rffmd/parallel.hpp"
#include "rffmd/potential.hpp"
#include "rffmd/random.hpp"
#include "rffmd/replicate.hpp"

namespace rffmd {

namespace {

constexpr int kDiagnosticProxSteps = 2000;

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t method_index(FrequencyMethod m) { return m == FrequencyMethod::AdaptiveMetropolis ? 0 : 1; }

std::filesystem::path prepare_out(const ExperimentConfig& cfg) {
    std::filesystem::create_directories(cfg.out_dir);
    return cfg.out_dir;
}

std::uint64_t dataset_seed(const ExperimentConfig& cfg, const std::string& plan, long J, int q) {
    return derive_seed(cfg.seed, "dataset", {fnv1a(plan), static_cast<std::uint64_t>(J), static_cast<std::uint64_t>(q)});
}

std::uint64_t testset_seed(const ExperimentConfig& cfg, long J, int q) {
    return derive_seed(cfg.seed, "testset", {static_cast<std::uint64_t>(J), static_cast<std::uint64_t>(q)});
}

// Shared by both frequency methods so that AM and GD start from the same draw.
std::uint64_t init_seed(const ExperimentConfig& cfg, long K, int q) {
    return derive_seed(cfg.seed, "init", {static_cast<std::uint64_t>(K), static_cast<std::uint64_t>(q)});
}

std::uint64_t training_seed(const ExperimentConfig& cfg, FrequencyMethod m, const std::string& plan, long K,
                            long J, int q) {
    return derive_seed(cfg.seed, "train",
                       {method_index(m), fnv1a(plan), static_cast<std::uint64_t>(K),
                        static_cast<std::uint64_t>(J), static_cast<std::uint64_t>(q)});
}

Dataset training_data(const ExperimentConfig& cfg, const std::string& plan, long J, int q) {
    return sample_dataset(TargetPotential(cfg.potential), cfg.plan(plan), static_cast<std::size_t>(J),
                          dataset_seed(cfg, plan, J, q));
}

Dataset test_data(const ExperimentConfig& cfg, long J, int q) {
    return sample_dataset(TargetPotential(cfg.potential), cfg.hybrid_plan(), static_cast<std::size_t>(J),
                          testset_seed(cfg, J, q));
}

struct ModelKey {
    FrequencyMethod method;
    std::string plan;
    long K;
    long J;
    int q;
};

// Everything that determines a trained model, as text.
std::string model_fingerprint(const ExperimentConfig& cfg, const ModelKey& k) {
    const KeyValueConfig& s = cfg.source;
    std::string text = fmt::format("v1 seed={} method={} plan={} K={} J={} q={}\n", cfg.seed,
                                   to_string(k.method), k.plan, k.K, k.J, k.q);
    for (const auto& [key, value] : s.entries()) {
        const bool relevant = key.rfind("potential.", 0) == 0 || key.rfind("sampling.", 0) == 0 ||
                              key.rfind("reg.", 0) == 0 ||
                              (key.rfind("train.", 0) == 0 && key != "train.method" && key != "train.K" &&
                               key != "train.J" && key != "train.data" && key != "train.plan");
        if (relevant) text += key + "=" + value + "\n";
    }
    return text;
}

std::filesystem::path model_cache_path(const ExperimentConfig& cfg, const ModelKey& k) {
    return cfg.models_dir / fmt::format("model_{}_{}_K{}_J{}_q{}_{:016x}.txt", to_string(k.method), k.plan,
                                        k.K, k.J, k.q, fnv1a(model_fingerprint(cfg, k)));
}

void store_model(const std::filesystem::path& path, const FourierFeatureModel& m) {
    std::filesystem::create_directories(path.parent_path());
    const auto tmp = std::filesystem::path(path.string() + ".tmp");
    save_model(tmp, m);
    std::filesystem::rename(tmp, path);
}

TrainingResult train_replica(const ExperimentConfig& cfg, const ModelKey& k, const Dataset* test) {
    const Dataset data = training_data(cfg, k.plan, k.J, k.q);
    TrainingConfig tc = cfg.training_for(k.method);
    tc.seed = training_seed(cfg, k.method, k.plan, k.K, k.J, k.q);
    TrainingResult res = train(initial_model(k.K, 2, init_seed(cfg, k.K, k.q)), data,
                               cfg.regularization(k.K, k.J), tc, test);
    store_model(model_cache_path(cfg, k), res.model);
    return res;
}

FourierFeatureModel cached_model(const ExperimentConfig& cfg, const ModelKey& k) {
    const auto path = model_cache_path(cfg, k);
    if (std::filesystem::exists(path)) return load_model(path);
    return train_replica(cfg, k, nullptr).model;
}

// Runs f(q) for every replica and rethrows failures tagged with the replica.
template <class T, class F>
std::vector<T> per_replica(int Q, F&& f) {
    std::vector<T> out(static_cast<std::size_t>(Q));
    parallel_for(out.size(), [&](std::size_t q) {
        const int replica = static_cast<int>(q);
        try {
            out[q] = f(replica);
        } catch (const ReplicaError&) {
            throw;
        } catch (const NumericError& e) {
            throw ReplicaError(replica, e.what(), true);
        } catch (const InvalidArgument&) {
            throw;
        } catch (const std::exception& e) {
            throw ReplicaError(replica, e.what(), false);
        }
    });
    return out;
}

CorrelationSettings correlation_settings(const ExperimentConfig& cfg) {
    CorrelationSettings s;
    s.dt = cfg.corr.dt;
    s.sampler = cfg.langevin;
    s.chains = cfg.corr.chains;
    return s;
}

std::size_t per_replica_count(std::size_t total, int Q) { return total / static_cast<std::size_t>(Q); }

std::uint64_t correlation_seed(const ExperimentConfig& cfg, int q) {
    return derive_seed(cfg.seed, "correlation", {static_cast<std::uint64_t>(q)});
}

// Mean curve over replicas with replica-spread confidence intervals.
CorrelationCurve aggregate_curves(const std::vector<CorrelationCurve>& curves) {
    CorrelationCurve out;
    out.taus = curves.front().taus;
    const std::size_t T = out.taus.size();
    out.values.resize(T);
    out.half_widths.resize(T);
    std::vector<double> column(curves.size());
    for (std::size_t i = 0; i < T; ++i) {
        for (std::size_t q = 0; q < curves.size(); ++q) column[q] = curves[q].values[i];
        const ReplicaStats s = summarize(column);
        out.values[i] = s.mean;
        out.half_widths[i] = s.half_width;
    }
    return out;
}

struct ReferenceRun {
    // [q][pair] curves with the surrogate's per-replica sample count.
    std::vector<std::vector<CorrelationCurve>> coupled;
    // [pair] replica-aggregated curves with M_ref samples in total.
    std::vector<CorrelationCurve> full;
};

ReferenceRun reference_curves(const ExperimentConfig& cfg, const std::vector<double>& taus) {
    const TargetPotential target(cfg.potential);
    const CorrelationSettings settings = correlation_settings(cfg);
    const std::size_t m = per_replica_count(cfg.corr.M, cfg.Q);
    const std::size_t m_ref = per_replica_count(cfg.corr.M_ref, cfg.Q);
    ReferenceRun run;
    run.coupled = per_replica<std::vector<CorrelationCurve>>(cfg.Q, [&](int q) {
        return estimate_correlations(target, cfg.corr.pairs, cfg.corr.beta, taus, m, correlation_seed(cfg, q),
                                     settings);
    });
    const auto full = per_replica<std::vector<CorrelationCurve>>(cfg.Q, [&](int q) {
        return estimate_correlations(target, cfg.corr.pairs, cfg.corr.beta, taus, m_ref,
                                     correlation_seed(cfg, q), settings);
    });
    for (std::size_t p = 0; p < cfg.corr.pairs.size(); ++p) {
        std::vector<CorrelationCurve> per_pair;
        for (const auto& replica : full) per_pair.push_back(replica[p]);
        run.full.push_back(aggregate_curves(per_pair));
    }
    return run;
}

struct SurrogateRun {
    std::vector<ReplicaStats> l1;              // [pair]
    std::vector<CorrelationCurve> curves;      // [pair], replica-aggregated
};

SurrogateRun surrogate_curves(const ExperimentConfig& cfg, const std::vector<double>& taus,
                              const ReferenceRun& ref, FrequencyMethod method, const std::string& plan,
                              long K, long J) {
    const TargetPotential target(cfg.potential);
    const CorrelationSettings settings = correlation_settings(cfg);
    const std::size_t m = per_replica_count(cfg.corr.M, cfg.Q);
    const std::size_t P = cfg.corr.pairs.size();
    const auto per_q = per_replica<std::vector<CorrelationCurve>>(cfg.Q, [&](int q) {
        const ReconstructedPotential vr(cached_model(cfg, {method, plan, K, J, q}), target);
        return estimate_correlations(vr, cfg.corr.pairs, cfg.corr.beta, taus, m, correlation_seed(cfg, q),
                                     settings);
    });
    SurrogateRun run;
    for (std::size_t p = 0; p < P; ++p) {
        std::vector<double> l1(per_q.size());
        std::vector<CorrelationCurve> curves;
        for (std::size_t q = 0; q < per_q.size(); ++q) {
            l1[q] = l1_curve_difference(per_q[q][p], ref.coupled[q][p]);
            curves.push_back(per_q[q][p]);
        }
        run.l1.push_back(summarize(l1));
        run.curves.push_back(aggregate_curves(curves));
    }
    return run;
}

void write_l1_table(const std::filesystem::path& path, const std::string& label_column,
                    const std::vector<L1Row>& rows) {
    CsvWriter w(path, {label_column, "K", "observable", "l1_error", "ci_half_width"});
    for (const auto& r : rows)
        w.field(r.label).field(static_cast<long long>(r.K)).field(r.observable).field(r.l1.mean)
            .field(r.l1.half_width).end_row();
}

} // namespace

SampleDataResult run_sample_data(const ExperimentConfig& cfg) {
    const auto out = prepare_out(cfg);
    SampleDataResult res;
    res.train_path = out / "train_data.csv";
    save_dataset(res.train_path, training_data(cfg, cfg.train_plan, cfg.train_J, 0));
    const auto test_path = out / "test_data.csv";
    save_dataset(test_path, test_data(cfg, cfg.train_J, 0));
    write_manifest(out, "sample-data", cfg.source.echo(),
                   {res.train_path, meta_path(res.train_path), test_path, meta_path(test_path)});
    return res;
}

TrainResult run_train(const ExperimentConfig& cfg) {
    const auto out = prepare_out(cfg);
    const Dataset data = cfg.train_data.empty() ? training_data(cfg, cfg.train_plan, cfg.train_J, 0)
                                                : load_dataset(cfg.train_data);
    const Dataset test = test_data(cfg, static_cast<long>(data.size()), 0);
    const long K = cfg.train_K;
    const long J = static_cast<long>(data.size());
    TrainingConfig tc = cfg.training_for(cfg.train_method);
    tc.seed = training_seed(cfg, cfg.train_method, cfg.train_plan, K, J, 0);

    TrainResult res{out / fmt::format("model_{}_K{}_J{}.txt", to_string(cfg.train_method), K, J),
                    train(initial_model(K, 2, init_seed(cfg, K, 0)), data, cfg.regularization(K, J), tc, &test)};
    save_model(res.model_path, res.training.model);

    const auto trace_path = out / "train_trace.csv";
    {
        CsvWriter w(trace_path, {"step", "train_loss", "test_loss"});
        for (const auto& tp : res.training.trace)
            w.field(tp.step).field(tp.train_loss).field(*tp.test_loss).end_row();
    }
    write_manifest(out, "train", cfg.source.echo(), {res.model_path, trace_path});
    return res;
}

std::vector<GeneralizationRow> run_generalization_study(const ExperimentConfig& cfg) {
    const auto out = prepare_out(cfg);
    std::vector<GeneralizationRow> rows;
    for (FrequencyMethod method : cfg.methods)
        for (long K : cfg.K_list)
            for (long J : cfg.J_list) {
                const RegularizationParams r = cfg.regularization(K, J);
                const auto losses = per_replica<double>(cfg.Q, [&](int q) {
                    const FourierFeatureModel m = cached_model(cfg, {method, "hybrid", K, J, q});
                    return empirical_loss(m, test_data(cfg, J, q), r);
                });
                rows.push_back({method, K, J, summarize(losses)});
            }

    const auto path = out / "generalization.csv";
    {
        CsvWriter w(path, {"method", "K", "J", "loss_mean", "ci_half_width"});
        for (const auto& r : rows)
            w.field(to_string(r.method)).field(static_cast<long long>(r.K)).field(static_cast<long long>(r.J))
                .field(r.loss.mean).field(r.loss.half_width).end_row();
    }
    write_manifest(out, "generalization", cfg.source.echo(), {path});
    return rows;
}

ReconstructionSummary run_reconstruction(const ExperimentConfig& cfg) {
    const auto out = prepare_out(cfg);
    const TargetPotential target(cfg.potential);
    const FourierFeatureModel model =
        cfg.reconstruct_model.empty()
            ? cached_model(cfg, {cfg.reconstruct_method, "hybrid", cfg.reconstruct_K, cfg.reconstruct_J, 0})
            : load_model(cfg.reconstruct_model);
    const ReconstructedPotential vr(model, target);

    ReconstructionSummary s;
    s.csv = out / "reconstruction.csv";
    const int n = cfg.reconstruct_points;
    const double e = cfg.reconstruct_extent;
    const double h = 2.0 * e / (n - 1);
    std::vector<double> big_v(static_cast<std::size_t>(n) * n), small_v(big_v.size());
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
        for (int j = 0; j < n; ++j) {
            const Vec2 x(-e + static_cast<double>(i) * h, -e + j * h);
            big_v[i * n + j] = target.value(x);
            small_v[i * n + j] = vr.value_grad(x).value;
        }
    });

    {
        CsvWriter w(s.csv, {"x1", "x2", "V", "vr", "diff"});
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const Vec2 x(-e + i * h, -e + j * h);
                const std::size_t idx = static_cast<std::size_t>(i) * n + j;
                const double diff = big_v[idx] - small_v[idx];
                w.field(x[0]).field(x[1]).field(big_v[idx]).field(small_v[idx]).field(diff).end_row();
                const double r = x.norm();
                if (r <= 2.0) s.max_diff_inner = std::max(s.max_diff_inner, std::abs(diff));
                if (r >= 3.0 && r <= 4.0) s.max_diff_shell = std::max(s.max_diff_shell, std::abs(diff));
                if (target.chi_b().at_radius(r) == 0.0) s.max_diff_outside = std::max(s.max_diff_outside, std::abs(diff));
                ++s.points;
            }
    }
    write_manifest(out, "reconstruct", cfg.source.echo(), {s.csv});
    return s;
}

CorrelationStudyResult run_correlation_study(const ExperimentConfig& cfg) {
    const auto out = prepare_out(cfg);
    const std::vector<double> taus = tau_grid(cfg.corr.dtau, cfg.corr.tau_max);
    const ReferenceRun ref = reference_curves(cfg, taus);

    CorrelationStudyResult res;
    for (std::size_t p = 0; p < cfg.corr.pairs.size(); ++p) {
        const auto path = out / curve_filename(cfg.corr.pairs[p], "ref", 0, 0);
        save_curve_csv(path, ref.full[p]);
        res.curve_files.push_back(path);
    }
    for (FrequencyMethod method : cfg.methods)
        for (long K : cfg.corr_K) {
            const SurrogateRun run = surrogate_curves(cfg, taus, ref, method, "hybrid", K, cfg.corr_J);
            for (std::size_t p = 0; p < cfg.corr.pairs.size(); ++p) {
                res.rows.push_back({to_string(method), K, cfg.corr.pairs[p].name(), run.l1[p]});
                const auto path = out / curve_filename(cfg.corr.pairs[p], to_string(method), K, cfg.corr_J);
                save_curve_csv(path, run.curves[p]);
                res.curve_files.push_back(path);
            }
        }

    const auto table = out / "correlation_l1.csv";
    write_l1_table(table, "method", res.rows);
    std::vector<std::filesystem::path> artifacts = res.curve_files;
    artifacts.push_back(table);
    write_manifest(out, "correlation", cfg.source.echo(), artifacts);
    return res;
}

std::vector<L1Row> run_sampling_comparison(const ExperimentConfig& cfg) {
    const auto out = prepare_out(cfg);
    const std::vector<double> taus = tau_grid(cfg.corr.dtau, cfg.corr.tau_max);
    const ReferenceRun ref = reference_curves(cfg, taus);

    std::vector<L1Row> rows;
    for (const std::string plan : {"single", "hybrid"})
        for (long K : cfg.compare_K) {
            const SurrogateRun run = surrogate_curves(cfg, taus, ref, cfg.compare_method, plan, K, cfg.compare_J);
            for (std::size_t p = 0; p < cfg.corr.pairs.size(); ++p)
                rows.push_back({plan, K, cfg.corr.pairs[p].name(), run.l1[p]});
        }
    const auto path = out / "sampling_comparison.csv";
    write_l1_table(path, "plan", rows);
    write_manifest(out, "sampling-compare", cfg.source.echo(), {path});
    return rows;
}

std::vector<AmplitudeRow> run_amplitude_diagnostics(const ExperimentConfig& cfg) {
    const auto out = prepare_out(cfg);
    struct Variant {
        std::string name;
        double c_tilde;
    };
    std::vector<Variant> variants{{"R1", cfg.reg.c_tilde}, {"R2", cfg.reg.c_tilde}};
    for (double c : cfg.amp_c_tilde) variants.push_back({"R3", c});

    std::vector<AmplitudeRow> rows;
    for (long K : cfg.amp_K) {
        const RegularizationParams r = cfg.regularization(K, cfg.amp_J);
        // sums[q][variant] = (sum_abs, sum_sq)
        const auto sums = per_replica<std::vector<AmplitudeSums>>(cfg.Q, [&](int q) {
            const FourierFeatureModel m = cached_model(cfg, {cfg.amp_method, "hybrid", K, cfg.amp_J, q});
            const Dataset data = training_data(cfg, "hybrid", cfg.amp_J, q);
            const NormalEquations ne = build_normal_equations(m.freqs(), data, r);
            const Eigen::VectorXcd ridge = solve_ridge(ne, r.lambda1, {.eigen_floor_fallback = true});
            std::vector<AmplitudeSums> s;
            for (const auto& v : variants) {
                if (v.name == "R1") {
                    s.push_back(amplitude_sums(ridge));
                    continue;
                }
                RegularizationParams rv = r;
                if (v.name == "R2") rv.lambda3 = 0.0;
                rv.c_tilde = v.c_tilde;
                ProximalOptions opts;
                opts.steps = kDiagnosticProxSteps;
                opts.initial = ridge;
                s.push_back(amplitude_sums(minimize_proximal(ne, rv, opts).amps));
            }
            return s;
        });
        for (std::size_t v = 0; v < variants.size(); ++v) {
            std::vector<double> abs_sums, sq_sums;
            for (const auto& replica : sums) {
                abs_sums.push_back(replica[v].l1);
                sq_sums.push_back(replica[v].l2sq);
            }
            rows.push_back({variants[v].name, variants[v].c_tilde, K, mean(abs_sums), mean(sq_sums)});
        }
    }

    const auto path = out / "amplitudes.csv";
    {
        CsvWriter w(path, {"variant", "c_tilde", "K", "sum_abs", "sum_sq"});
        for (const auto& r : rows)
            w.field(r.variant).field(r.c_tilde).field(static_cast<long long>(r.K)).field(r.sum_abs)
                .field(r.sum_sq).end_row();
    }
    write_manifest(out, "amplitudes", cfg.source.echo(), {path});
    return rows;
}

double FrequencyDensityResult::tv_of(const std::string& name) const {
    for (const auto& [n, v] : tv)
        if (n == name) return v;
    throw InvalidArgument("no total-variation entry for '" + name + "'");
}

FrequencyDensityResult run_frequency_density(const ExperimentConfig& cfg) {
    const auto out = prepare_out(cfg);
    const TargetPotential target(cfg.potential);
    const long K = cfg.density_K;
    const long J = cfg.density_J;

    std::map<std::string, std::vector<Eigen::MatrixXd>> sets;
    for (int q = 0; q < cfg.Q; ++q) sets["init"].push_back(initial_frequencies(K, 2, init_seed(cfg, K, q)));
    for (FrequencyMethod method : cfg.methods) {
        const auto models = per_replica<Eigen::MatrixXd>(cfg.Q, [&](int q) {
            return cached_model(cfg, {method, "hybrid", K, J, q}).freqs();
        });
        sets[to_string(method)] = models;
    }

    GridSpec tv_grid = cfg.density_grid;
    tv_grid.n = cfg.density_tv_n;
    const DensityGrid optimal_tv = optimal_density(target, tv_grid, cfg.quadrature);

    FrequencyDensityResult res;
    res.optimal = optimal_density(target, cfg.density_grid, cfg.quadrature);
    std::vector<std::filesystem::path> artifacts;
    const auto opt_path = out / "optimal_density.csv";
    save_density_csv(opt_path, res.optimal);
    artifacts.push_back(opt_path);

    std::vector<std::string> names;
    for (FrequencyMethod method : cfg.methods) names.push_back(to_string(method));
    names.push_back("init");
    for (const auto& name : names) {
        const auto& freqs = sets.at(name);
        DensityGrid g = empirical_frequency_density(std::span<const Eigen::MatrixXd>(freqs), cfg.density_grid);
        const auto path = out / fmt::format("empirical_density_{}.csv", name);
        save_density_csv(path, g);
        artifacts.push_back(path);
        res.empirical.emplace_back(name, std::move(g));
        const DensityGrid coarse = empirical_frequency_density(std::span<const Eigen::MatrixXd>(freqs), tv_grid);
        res.tv.emplace_back(name, total_variation(coarse, optimal_tv));
    }

    const auto tv_path = out / "density_tv.csv";
    {
        CsvWriter w(tv_path, {"density", "tv_to_optimal"});
        for (const auto& [name, tv] : res.tv) w.field(name).field(tv).end_row();
    }
    artifacts.push_back(tv_path);
    write_manifest(out, "freq-density", cfg.source.echo(), artifacts);
    return res;
}

std::vector<TraceRow> run_training_trace(const ExperimentConfig& cfg) {
    const auto out = prepare_out(cfg);
    const long K = cfg.trace_K;
    const long J = cfg.trace_J;
    std::vector<TraceRow> rows;
    for (FrequencyMethod method : cfg.methods) {
        const auto traces = per_replica<std::vector<double>>(cfg.Q, [&](int q) {
            const Dataset test = test_data(cfg, J, q);
            const TrainingResult res = train_replica(cfg, {method, "hybrid", K, J, q}, &test);
            std::vector<double> losses;
            for (const auto& tp : res.trace) losses.push_back(*tp.test_loss);
            return losses;
        });
        const auto stats = aggregate_replicas(traces);
        for (std::size_t s = 0; s < stats.size(); ++s)
            rows.push_back({method, static_cast<int>(s), stats[s].mean});
    }
    const auto path = out / "training_trace.csv";
    {
        CsvWriter w(path, {"method", "step", "test_loss"});
        for (const auto& r : rows) w.field(to_string(r.method)).field(r.step).field(r.test_loss).end_row();
    }
    write_manifest(out, "training-trace", cfg.source.echo(), {path});
    return rows;
}

} // namespace rffmd
