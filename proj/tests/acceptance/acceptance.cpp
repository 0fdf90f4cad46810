// Acceptance suite: one PASS/FAIL line per criterion, tolerances fixed below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "rffmd/amplitude_solvers.hpp"
#include "rffmd/config.hpp"
#include "rffmd/dynamics.hpp"
#include "rffmd/experiments.hpp"
#include "rffmd/langevin.hpp"
#include "rffmd/loss.hpp"
#include "rffmd/parallel.hpp"
#include "rffmd/potential.hpp"
#include "rffmd/random.hpp"
#include "rffmd/stats.hpp"

namespace fs = std::filesystem;
using namespace rffmd;

namespace {

constexpr std::uint64_t kSeed = 20240611;
constexpr int kBudgetCores = 8;

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    std::string name;
    double budget_s;  // 0: no runtime budget
    bool budget_on_8_cores;
    std::function<Outcome(const fs::path&)> run;
};

class Harmonic final : public Potential {
public:
    ValueGrad value_grad(const Vec2& x) const override { return {0.5 * x.squaredNorm(), x}; }
};

ExperimentConfig study_config(const fs::path& work, const std::string& name,
                              const std::vector<std::pair<std::string, std::string>>& overrides) {
    KeyValueConfig kv;
    kv.set("run.seed", std::to_string(kSeed));
    kv.set("run.out", (work / name).string());
    kv.set("run.models_dir", (work / "models").string());
    for (const auto& [k, v] : overrides) kv.set(k, v);
    return make_experiment_config(Profile::Desk, kv);
}

Vec2 uniform_in_box(Rng& rng, double half) {
    std::uniform_real_distribution<double> u(-half, half);
    const double a = u(rng);
    const double b = u(rng);
    return Vec2(a, b);
}

Dataset dataset_from(const std::function<ValueGrad(const Vec2&)>& f, const std::vector<Vec2>& pts) {
    const auto J = static_cast<Eigen::Index>(pts.size());
    Eigen::MatrixXd x(J, 2), g(J, 2);
    Eigen::VectorXd v(J);
    for (Eigen::Index j = 0; j < J; ++j) {
        const ValueGrad vg = f(pts[static_cast<std::size_t>(j)]);
        x.row(j) = pts[static_cast<std::size_t>(j)].transpose();
        v[j] = vg.value;
        g.row(j) = vg.grad.transpose();
    }
    return Dataset(x, v, g);
}

FourierFeatureModel random_model(Rng& rng, Eigen::Index K) {
    std::normal_distribution<double> n;
    Eigen::MatrixXd w(K, 2);
    Eigen::VectorXcd eta(K);
    for (Eigen::Index k = 0; k < K; ++k) {
        w(k, 0) = 1.5 * n(rng);
        w(k, 1) = 1.5 * n(rng);
        const double re = 0.3 * n(rng);
        const double im = 0.3 * n(rng);
        eta[k] = Complex(re, im);
    }
    return FourierFeatureModel(w, eta);
}

// Norm-wise error of an analytic gradient against central differences,
// relative to max(|fd|, 1).
double grad_error(const Eigen::VectorXd& analytic, const Eigen::VectorXd& fd) {
    return (analytic - fd).norm() / std::max(fd.norm(), 1.0);
}

Eigen::VectorXd central_difference(const std::function<double(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& x, double h) {
    Eigen::VectorXd g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        Eigen::VectorXd xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        g[i] = (f(xp) - f(xm)) / (2.0 * h);
    }
    return g;
}

Outcome gradient_oracles(const fs::path&) {
    constexpr int kPoints = 100;
    constexpr double kTol = 1e-5;
    constexpr double kH = 1e-6;
    Rng rng(derive_seed(kSeed, "acceptance-gradients"));
    const TargetPotential target;

    std::vector<std::pair<std::string, double>> worst;
    auto check_potential = [&](const std::string& name, const std::function<ValueGrad(const Vec2&)>& f) {
        double w = 0.0;
        for (int i = 0; i < kPoints; ++i) {
            const Vec2 x = uniform_in_box(rng, 6.0);
            const auto value = [&](const Eigen::VectorXd& y) { return f(Vec2(y[0], y[1])).value; };
            w = std::max(w, grad_error(f(x).grad, central_difference(value, x, kH)));
        }
        worst.emplace_back(name, w);
    };
    check_potential("V", [&](const Vec2& x) { return target.value_grad(x); });
    check_potential("v", [&](const Vec2& x) { return target.inner(x); });

    double w_bar = 0.0, w_rec = 0.0, w_eta = 0.0, w_omega = 0.0;
    for (int i = 0; i < kPoints; ++i) {
        const FourierFeatureModel m = random_model(rng, 8);
        const Vec2 x = uniform_in_box(rng, 6.0);
        const Eigen::VectorXcd g = m.grad(x);
        const auto re = [&](const Eigen::VectorXd& y) { return m.eval(y).real(); };
        const auto im = [&](const Eigen::VectorXd& y) { return m.eval(y).imag(); };
        w_bar = std::max({w_bar, grad_error(g.real(), central_difference(re, x, kH)),
                          grad_error(g.imag(), central_difference(im, x, kH))});

        const ReconstructedPotential vr(m, target);
        const auto rec = [&](const Eigen::VectorXd& y) { return vr.value(Vec2(y[0], y[1])); };
        w_rec = std::max(w_rec, grad_error(vr.grad(x), central_difference(rec, x, kH)));
    }
    for (int i = 0; i < kPoints; ++i) {
        const FourierFeatureModel m = random_model(rng, 6);
        std::vector<Vec2> pts;
        for (int j = 0; j < 40; ++j) pts.push_back(uniform_in_box(rng, 4.5));
        const Dataset data = dataset_from([&](const Vec2& y) { return target.inner(y); }, pts);
        const RegularizationParams r;
        const auto K = m.size();

        Eigen::VectorXd packed(2 * K);
        packed << m.amps().real(), m.amps().imag();
        const auto loss_eta = [&](const Eigen::VectorXd& p) {
            const Eigen::VectorXcd eta = p.head(K).cast<Complex>() + Complex(0, 1) * p.tail(K).cast<Complex>();
            return regularized_loss(m.with_amps(eta), data, r, LossVariant::R2);
        };
        const Eigen::VectorXcd ge = loss_gradient_amps(m, data, r, LossVariant::R2);
        Eigen::VectorXd ge_packed(2 * K);
        ge_packed << ge.real(), ge.imag();
        w_eta = std::max(w_eta, grad_error(ge_packed, central_difference(loss_eta, packed, kH)));

        const Eigen::MatrixXd w = m.freqs();
        const Eigen::VectorXd flat = Eigen::Map<const Eigen::VectorXd>(w.data(), w.size());
        const auto loss_omega = [&](const Eigen::VectorXd& f) {
            return empirical_loss(m.with_freqs(Eigen::Map<const Eigen::MatrixXd>(f.data(), K, 2)), data, r);
        };
        const Eigen::MatrixXd gw = loss_gradient_freqs(m, data, r);
        const Eigen::VectorXd gw_flat = Eigen::Map<const Eigen::VectorXd>(gw.data(), gw.size());
        w_omega = std::max(w_omega, grad_error(gw_flat, central_difference(loss_omega, flat, kH)));
    }
    worst.emplace_back("vbar", w_bar);
    worst.emplace_back("v_r", w_rec);
    worst.emplace_back("loss/eta", w_eta);
    worst.emplace_back("loss/omega", w_omega);

    Outcome o{true, fmt::format("{} points each, max rel err:", kPoints)};
    for (const auto& [name, w] : worst) {
        o.pass = o.pass && w <= kTol;
        o.detail += fmt::format(" {}={:.2e}", name, w);
    }
    o.detail += fmt::format(" (tol {:.0e})", kTol);
    return o;
}

Outcome gibbs_oracle(const fs::path&) {
    constexpr long kSamples = 1'000'000;
    constexpr double kTol = 0.01;
    const Harmonic pot;
    LangevinConfig cfg;
    cfg.beta = 1.0;
    cfg.dt = 0.01;
    cfg.seed = derive_seed(kSeed, "acceptance-gibbs");
    LangevinChain chain(pot, cfg);
    chain.burn_in();
    CompensatedSum s1, s2;
    for (long i = 0; i < kSamples; ++i) {
        const double x1 = chain.next_sample()[0];
        s1 += x1;
        s2 += x1 * x1;
    }
    const double m = s1.value() / kSamples;
    const double var = s2.value() / kSamples - m * m;
    return {std::abs(var - 1.0) <= kTol,
            fmt::format("Var(x1)={:.5f} from {} samples, thinning {} (tol {})", var, kSamples, cfg.thinning, kTol)};
}

Outcome harmonic_observables(const fs::path&) {
    constexpr double kSigmas = 3.0;
    TargetParams params;
    params.gamma = 0.0;
    const TargetPotential pot(params);
    const double beta = 1.0;
    const std::vector<double> taus = tau_grid(0.1, 2.0);
    const std::vector<ObservablePair> pairs{ObservablePair::parse("x1x1"), ObservablePair::parse("p1p1")};
    CorrelationSettings settings;
    settings.dt = 5e-3;
    const auto curves = estimate_correlations(pot, pairs, beta, taus, std::size_t{1} << 16,
                                              derive_seed(kSeed, "acceptance-harmonic"), settings);
    Outcome o{true, ""};
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        double worst = 0.0;
        for (std::size_t i = 0; i < taus.size(); ++i) {
            const double se = curves[p].half_widths[i] / kZ95;
            const double z = std::abs(curves[p].values[i] - std::cos(taus[i]) / beta) / se;
            worst = std::max(worst, z);
        }
        o.pass = o.pass && worst <= kSigmas;
        o.detail += fmt::format("{}: max |err|/SE={:.2f} over {} points; ", pairs[p].name(), worst, taus.size());
    }
    o.detail += fmt::format("M=2^16 (tol {} SE)", kSigmas);
    return o;
}

Outcome exact_representability(const fs::path&) {
    constexpr double kTol = 1e-6;
    constexpr int kJ = 10000;
    const TargetPotential target;
    const SmoothCutoff& chi = target.chi_c();
    const double radius = chi.radius();
    const auto f = [&](const Vec2& x) {
        const double c = chi.value(x);
        const Vec2 gc = chi.gradient(x);
        return ValueGrad{std::cos(x[0]) * c, Vec2(-std::sin(x[0]) * c, 0.0) + std::cos(x[0]) * gc};
    };
    Rng rng(derive_seed(kSeed, "acceptance-representable"));
    std::vector<Vec2> pts;
    while (pts.size() < kJ) {
        const Vec2 x = uniform_in_box(rng, radius);
        if (x.norm() <= radius) pts.push_back(x);
    }
    const Dataset data = dataset_from(f, pts);
    Eigen::MatrixXd w(2, 2);
    w << 1.0, 0.0, -1.0, 0.0;
    RegularizationParams r;
    r.lambda1 = 1e-10;
    r.lambda2 = 0.0;
    r.lambda3 = 0.0;
    const FourierFeatureModel m(w, fit_amplitudes_ridge(w, data, r));
    const double loss = regularized_loss(m, data, r, LossVariant::R1);
    return {loss <= kTol, fmt::format("training loss {:.3e} with J={} points in |x|<={} (tol {:.0e})", loss, kJ,
                                      radius, kTol)};
}

Outcome generalization_scaling(const fs::path& work) {
    const auto cfg = study_config(work, "generalization",
                                  {{"study.K", "16,32,64,128,256"}, {"study.J", "10000"}, {"study.Q", "8"},
                                   {"study.methods", "AM"}});
    const auto rows = run_generalization_study(cfg);
    std::vector<double> K, L;
    bool decreasing = true;
    std::string series;
    for (const auto& r : rows) {
        if (!L.empty() && !(r.loss.mean < L.back())) decreasing = false;
        K.push_back(static_cast<double>(r.K));
        L.push_back(r.loss.mean);
        series += fmt::format(" K{}={:.4g}", r.K, r.loss.mean);
    }
    const double slope = loglog_slope(K, L);
    return {decreasing && slope >= -1.4 && slope <= -0.5,
            fmt::format("L_emp:{}; strictly decreasing={}; slope={:.3f} (want [-1.4, -0.5])", series, decreasing,
                        slope)};
}

Outcome j_dependence(const fs::path& work) {
    const auto cfg = study_config(work, "j_dependence",
                                  {{"study.K", "256"}, {"study.J", "10000,100000"}, {"study.Q", "8"},
                                   {"study.methods", "AM"}});
    const auto rows = run_generalization_study(cfg);
    const ReplicaStats& small = rows.at(0).loss;
    const ReplicaStats& large = rows.at(1).loss;
    const bool separated = large.mean + large.half_width < small.mean - small.half_width;
    return {large.mean < small.mean && separated,
            fmt::format("K=256: J=1e4 {:.4g} +- {:.3g}, J=1e5 {:.4g} +- {:.3g}; CIs disjoint={}", small.mean,
                        small.half_width, large.mean, large.half_width, separated)};
}

Outcome observable_convergence(const fs::path& work) {
    const auto cfg = study_config(work, "correlation",
                                  {{"corr.K", "16,64,256"}, {"corr.J", "10000"}, {"corr.M", "65536"},
                                   {"study.Q", "8"}, {"study.methods", "AM"}});
    const auto res = run_correlation_study(cfg);
    std::vector<double> K, L;
    bool decreasing = true;
    std::string series;
    for (const auto& r : res.rows) {
        if (r.observable != "x1x1") continue;
        if (!L.empty() && !(r.l1.mean < L.back())) decreasing = false;
        K.push_back(static_cast<double>(r.K));
        L.push_back(r.l1.mean);
        series += fmt::format(" K{}={:.4g}", r.K, r.l1.mean);
    }
    const double slope = loglog_slope(K, L);
    return {decreasing && slope >= -1.1 && slope <= -0.2,
            fmt::format("L1(x1x1):{}; decreasing={}; slope={:.3f} (want [-1.1, -0.2])", series, decreasing, slope)};
}

Outcome hybrid_benefit(const fs::path& work) {
    const auto cfg = study_config(work, "sampling_compare",
                                  {{"compare.K", "256"}, {"compare.J", "10000"}, {"study.Q", "8"}});
    const auto rows = run_sampling_comparison(cfg);
    Outcome o{true, ""};
    for (const std::string obs : {"x1x1", "p1p1"}) {
        double hybrid = NAN, single = NAN;
        for (const auto& r : rows) {
            if (r.observable != obs) continue;
            (r.label == "hybrid" ? hybrid : single) = r.l1.mean;
        }
        o.pass = o.pass && hybrid <= single;
        o.detail += fmt::format("{}: hybrid {:.4g} vs single {:.4g}; ", obs, hybrid, single);
    }
    o.detail += "K=256, " + to_string(cfg.compare_method);
    return o;
}

Outcome amplitude_diagnostics(const fs::path& work) {
    const auto cfg = study_config(work, "amplitudes",
                                  {{"amp.K", "16,32,64,128,256"}, {"amp.J", "10000"}, {"amp.c_tilde", "40,100"},
                                   {"study.Q", "8"}});
    const auto rows = run_amplitude_diagnostics(cfg);
    std::vector<double> K, sq;
    double c40 = NAN, c100 = NAN;
    for (const auto& r : rows) {
        if (r.variant == "R1") {
            K.push_back(static_cast<double>(r.K));
            sq.push_back(r.sum_sq);
        }
        if (r.variant == "R3" && r.K == 256) (r.c_tilde == 40.0 ? c40 : c100) = r.sum_abs;
    }
    const double slope = loglog_slope(K, sq);
    const bool slope_ok = slope >= -1.3 && slope <= -0.6;
    const bool c40_ok = c40 >= 30.0 && c40 <= 60.0;
    const bool c100_ok = c100 > c40;
    return {slope_ok && c40_ok && c100_ok,
            fmt::format("sum|eta|^2 slope={:.3f} (want [-1.3, -0.6]); K=256 sum|eta|: C=40 {:.4g} (want [30, 60]), "
                        "C=100 {:.4g} (want > C=40)",
                        slope, c40, c100)};
}

Outcome frequency_density(const fs::path& work) {
    const auto cfg = study_config(work, "freq_density",
                                  {{"density.K", "256"}, {"density.J", "10000"}, {"study.Q", "8"},
                                   {"study.methods", "AM,GD"}});
    const auto res = run_frequency_density(cfg);
    const double am = res.tv_of("AM");
    const double gd = res.tv_of("GD");
    const double init = res.tv_of("init");
    return {am < init && am <= gd, fmt::format("TV to optimal: AM {:.4f}, GD {:.4f}, init {:.4f}", am, gd, init)};
}

// Checks eta - p in t*l3 * d(max(|.|_1 - C, 0))(p): the residual is mu times the
// phase of p on its support, at most mu in modulus off it, with mu = t*l3 above
// the budget, 0 below it and in [0, t*l3] on it.
double prox_violation(const Eigen::VectorXcd& eta, const Eigen::VectorXcd& p, double t, double c) {
    const Eigen::VectorXcd res = eta - p;
    const double s = p.cwiseAbs().sum();
    double mu_sum = 0.0;
    int support = 0;
    for (Eigen::Index k = 0; k < p.size(); ++k)
        if (std::abs(p[k]) > 0.0) {
            mu_sum += std::abs(res[k]);
            ++support;
        }
    double mu = support > 0 ? mu_sum / support : 0.0;
    if (support == 0) mu = res.cwiseAbs().maxCoeff();
    double v = 0.0;
    for (Eigen::Index k = 0; k < p.size(); ++k) {
        if (std::abs(p[k]) > 0.0)
            v = std::max(v, std::abs(res[k] - mu * p[k] / std::abs(p[k])));
        else
            v = std::max(v, std::abs(res[k]) - mu);
    }
    v = std::max({v, -mu, mu - t});
    const double gap = 1e-12 * std::max(1.0, c);
    if (s > c + gap) v = std::max(v, std::abs(mu - t));
    if (s < c - gap) v = std::max(v, mu);
    return v;
}

Outcome prox_correctness(const fs::path&) {
    constexpr int kInstances = 1000;
    constexpr double kTol = 1e-8;
    Rng rng(derive_seed(kSeed, "acceptance-prox"));
    std::normal_distribution<double> n;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> size(1, 24);
    double worst = 0.0;
    int above = 0, below = 0;
    for (int i = 0; i < kInstances; ++i) {
        const int K = size(rng);
        Eigen::VectorXcd eta(K);
        for (int k = 0; k < K; ++k) {
            const double re = n(rng);
            const double im = n(rng);
            eta[k] = u(rng) < 0.1 ? Complex(0.0, 0.0) : Complex(re, im);
        }
        const double total = eta.cwiseAbs().sum();
        const double t = 3.0 * u(rng);
        const double c = 1.2 * total * u(rng);
        const Eigen::VectorXcd p = budget_prox(eta, t, c);
        (p.cwiseAbs().sum() > c ? above : below) += 1;
        worst = std::max(worst, prox_violation(eta, p, t, c));
    }
    return {worst <= kTol, fmt::format("{} instances ({} above budget after prox, {} at or below): max violation "
                                       "{:.2e} (tol {:.0e})",
                                       kInstances, above, below, worst, kTol)};
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<fs::path> csv_files(const fs::path& root) {
    std::vector<fs::path> out;
    for (const auto& e : fs::recursive_directory_iterator(root))
        if (e.is_regular_file() && e.path().extension() == ".csv") out.push_back(fs::relative(e.path(), root));
    std::sort(out.begin(), out.end());
    return out;
}

// Largest relative difference over numeric cells; infinity on structural mismatch.
double csv_max_rel_diff(const std::string& a, const std::string& b) {
    std::istringstream sa(a), sb(b);
    std::string la, lb;
    double worst = 0.0;
    while (true) {
        const bool ga = static_cast<bool>(std::getline(sa, la));
        const bool gb = static_cast<bool>(std::getline(sb, lb));
        if (ga != gb) return INFINITY;
        if (!ga) break;
        std::istringstream ca(la), cb(lb);
        std::string fa, fb;
        while (true) {
            const bool ha = static_cast<bool>(std::getline(ca, fa, ','));
            const bool hb = static_cast<bool>(std::getline(cb, fb, ','));
            if (ha != hb) return INFINITY;
            if (!ha) break;
            if (fa == fb) continue;
            char* ea = nullptr;
            char* eb = nullptr;
            const double x = std::strtod(fa.c_str(), &ea);
            const double y = std::strtod(fb.c_str(), &eb);
            if (*ea != '\0' || *eb != '\0') return INFINITY;
            worst = std::max(worst, std::abs(x - y) / std::max({std::abs(x), std::abs(y), 1e-300}));
        }
    }
    return worst;
}

void run_small_studies(const fs::path& dir) {
    fs::remove_all(dir);
    const std::vector<std::pair<std::string, std::string>> small{
        {"sampling.burn_in", "500"}, {"sampling.thinning", "20"}, {"study.K", "8,16"}, {"study.J", "400"},
        {"study.Q", "4"},          {"train.am_steps", "5"},     {"train.gd_steps", "5"}, {"train.eta_inner_steps", "20"},
        {"corr.M", "512"},          {"corr.M_ref", "1024"},      {"corr.chains", "8"},    {"corr.tau_max", "0.5"},
        {"corr.K", "8"},            {"corr.J", "400"},           {"compare.K", "8"},      {"compare.J", "400"},
        {"amp.K", "8,16"},          {"amp.J", "400"},            {"density.n", "32"},     {"density.tv_n", "8"},
        {"density.K", "16"},        {"density.J", "400"},        {"density.quad_points", "64"}};
    auto with = [&](const std::string& name) {
        auto kv = small;
        kv.emplace_back("run.models_dir", (dir / "models").string());
        KeyValueConfig c;
        c.set("run.seed", std::to_string(kSeed));
        c.set("run.out", (dir / name).string());
        for (const auto& [k, v] : kv) c.set(k, v);
        return make_experiment_config(Profile::Desk, c);
    };
    run_generalization_study(with("generalization"));
    run_correlation_study(with("correlation"));
    run_sampling_comparison(with("sampling_compare"));
    run_amplitude_diagnostics(with("amplitudes"));
    run_frequency_density(with("freq_density"));
}

Outcome determinism(const fs::path& work) {
    constexpr double kTol = 1e-10;
    const fs::path root = work / "determinism";
    const char* saved = std::getenv("RFFMD_THREADS");
    const std::string saved_value = saved ? saved : "";
    setenv("RFFMD_THREADS", "1", 1);
    run_small_studies(root / "a");
    run_small_studies(root / "b");
    setenv("RFFMD_THREADS", "4", 1);
    run_small_studies(root / "c");
    if (saved)
        setenv("RFFMD_THREADS", saved_value.c_str(), 1);
    else
        unsetenv("RFFMD_THREADS");

    const auto files = csv_files(root / "a");
    bool identical = files == csv_files(root / "b") && files == csv_files(root / "c");
    double worst = identical ? 0.0 : INFINITY;
    int differing = 0;
    for (const auto& f : files) {
        if (!identical) break;
        const std::string a = read_file(root / "a" / f);
        if (a != read_file(root / "b" / f)) identical = false;
        const std::string c = read_file(root / "c" / f);
        if (a != c) ++differing;
        worst = std::max(worst, csv_max_rel_diff(a, c));
    }
    return {identical && worst <= kTol,
            fmt::format("{} CSV files; repeat bit-identical={}; 1 vs 4 threads: {} files differ, max rel diff "
                        "{:.2e} (tol {:.0e})",
                        files.size(), identical, differing, worst, kTol)};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria for the surrogate-potential library"};
    std::string work_dir = "acceptance_work";
    std::vector<int> only;
    app.add_option("--work-dir", work_dir, "directory for study outputs and the shared model cache");
    app.add_option("--only", only, "criterion numbers to run")->delimiter(',');
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> criteria{
        {1, "gradient oracles", 10.0, false, gradient_oracles},
        {2, "Gibbs sampler oracle", 30.0, false, gibbs_oracle},
        {3, "harmonic observable oracle", 120.0, false, harmonic_observables},
        {4, "exact representability", 0.0, false, exact_representability},
        {5, "generalization scaling", 1800.0, true, generalization_scaling},
        {6, "J-dependence", 0.0, false, j_dependence},
        {7, "observable convergence", 7200.0, true, observable_convergence},
        {8, "hybrid-sampling benefit", 0.0, false, hybrid_benefit},
        {9, "amplitude diagnostics", 0.0, false, amplitude_diagnostics},
        {10, "frequency density", 0.0, false, frequency_density},
        {11, "prox-operator correctness", 0.0, false, prox_correctness},
        {12, "determinism and parallel invariance", 0.0, false, determinism},
    };
    const std::set<int> selected(only.begin(), only.end());
    const fs::path work(work_dir);
    fs::create_directories(work);
    const int cores = thread_count();

    int failures = 0;
    for (const auto& c : criteria) {
        if (!selected.empty() && !selected.count(c.id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run(work);
        } catch (const std::exception& e) {
            o = {false, fmt::format("error: {}", e.what())};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::string timing = fmt::format("{:.1f} s", secs);
        if (c.budget_s > 0.0) {
            if (c.budget_on_8_cores && cores < kBudgetCores) {
                timing += fmt::format(", budget {:.0f} s applies to {} cores, not enforced on {}", c.budget_s,
                                      kBudgetCores, cores);
            } else {
                timing += fmt::format(", budget {:.0f} s", c.budget_s);
                o.pass = o.pass && secs < c.budget_s;
            }
        }
        if (!o.pass) ++failures;
        fmt::print("{} [{}] {}: {} ({})\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail, timing);
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
