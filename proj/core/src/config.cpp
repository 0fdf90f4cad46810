#include "rffmd/config.hpp"

#include <fstream>
#include <sstream>

#include <fmt/core.h>

#include "rffmd/csv.hpp"
#include "rffmd/errors.hpp"

namespace rffmd {

KeyValueConfig KeyValueConfig::parse(const std::string& text, const std::string& origin) {
    KeyValueConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw ConfigError(fmt::format("{}:{}: expected key=value", origin, lineno));
        const std::string key = trim(body.substr(0, eq));
        if (key.empty()) throw ConfigError(fmt::format("{}:{}: empty key", origin, lineno));
        cfg.values_[key] = trim(body.substr(eq + 1));
    }
    return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path.string());
}

void KeyValueConfig::merge(const KeyValueConfig& other) {
    for (const auto& [k, v] : other.values_) values_[k] = v;
}

const std::string& KeyValueConfig::get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing config key '" + key + "'");
    return it->second;
}

namespace {

template <class F>
auto convert(const std::string& key, const std::string& value, F&& f) {
    try {
        return f(value);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(fmt::format("config key '{}': bad value '{}' ({})", key, value, e.what()));
    }
}

} // namespace

double KeyValueConfig::get_double(const std::string& key) const {
    return convert(key, get(key), [](const std::string& s) { return parse_double(s); });
}

long KeyValueConfig::get_long(const std::string& key) const {
    return convert(key, get(key), [](const std::string& s) { return static_cast<long>(parse_int(s)); });
}

std::vector<std::string> KeyValueConfig::get_strings(const std::string& key) const {
    std::vector<std::string> out;
    const std::string& v = get(key);
    if (trim(v).empty()) return out;
    for (const auto& tok : split(v, ',')) out.push_back(trim(tok));
    return out;
}

std::vector<double> KeyValueConfig::get_doubles(const std::string& key) const {
    std::vector<double> out;
    for (const auto& s : get_strings(key))
        out.push_back(convert(key, s, [](const std::string& t) { return parse_double(t); }));
    return out;
}

std::vector<long> KeyValueConfig::get_longs(const std::string& key) const {
    std::vector<long> out;
    for (const auto& s : get_strings(key))
        out.push_back(convert(key, s, [](const std::string& t) { return static_cast<long>(parse_int(t)); }));
    return out;
}

std::string KeyValueConfig::echo() const {
    std::string out;
    for (const auto& [k, v] : values_) out += k + "=" + v + "\n";
    return out;
}

Profile parse_profile(const std::string& s) {
    if (s == "desk") return Profile::Desk;
    if (s == "paper") return Profile::Paper;
    throw ConfigError("unknown profile '" + s + "' (expected desk or paper)");
}

std::string to_string(Profile p) { return p == Profile::Desk ? "desk" : "paper"; }

KeyValueConfig default_config(Profile profile) {
    const bool paper = profile == Profile::Paper;
    KeyValueConfig c;
    c.set("run.profile", to_string(profile));
    c.set("run.seed", "1");
    c.set("run.out", "out");
    c.set("run.models_dir", "");

    c.set("potential.alpha", format_exact(std::sqrt(2.0)));
    c.set("potential.gamma", "2");
    c.set("potential.R_a", "2");
    c.set("potential.delta_a", "1");
    c.set("potential.R_c", "4");
    c.set("potential.delta_c", "0.2");
    c.set("potential.R_b", "3");
    c.set("potential.delta_b", "0.2");

    c.set("sampling.betas", "1,0.3");
    c.set("sampling.fractions", "0.5,0.5");
    c.set("sampling.dt", "0.01");
    c.set("sampling.burn_in", "10000");
    c.set("sampling.thinning", "200");
    c.set("sampling.single_beta", "1");

    c.set("study.K", paper ? "16,32,64,128,256,512,1024" : "16,32,64,128,256");
    c.set("study.J", paper ? "10000,100000" : "10000");
    c.set("study.Q", paper ? "32" : "8");
    c.set("study.methods", "AM,GD");

    c.set("reg.alpha1", "1");
    c.set("reg.alpha2", "1");
    c.set("reg.lambda1", "0.01");
    c.set("reg.lambda2", "0.001");
    c.set("reg.lambda3", "0.01");
    c.set("reg.c_tilde", "100");
    c.set("reg.scaling", "fixed");

    c.set("train.am_steps", paper ? "200" : "60");
    c.set("train.gd_steps", paper ? "500" : "60");
    c.set("train.proposal_scale", "0.5");
    c.set("train.acceptance_exponent", "4");
    c.set("train.omega_lr", "1");
    c.set("train.eta_solver", "proximal");
    c.set("train.eta_inner_steps", "200");
    c.set("train.method", "AM");
    c.set("train.K", paper ? "1024" : "256");
    c.set("train.J", paper ? "100000" : "10000");
    c.set("train.data", "");
    c.set("train.plan", "hybrid");

    c.set("corr.beta", "1");
    c.set("corr.dtau", "0.1");
    c.set("corr.tau_max", "2");
    c.set("corr.M", paper ? "2097152" : "65536");
    c.set("corr.M_ref", paper ? "67108864" : "262144");
    c.set("corr.dt", "0.005");
    c.set("corr.chains", "64");
    c.set("corr.observables", "x1x1,p1p1");
    c.set("corr.K", paper ? "16,32,64,128,256,512,1024" : "16,64,256");
    c.set("corr.J", "10000");

    c.set("compare.K", paper ? "16,32,64,128,256,512,1024" : "16,64,256");
    c.set("compare.J", "10000");
    c.set("compare.method", "GD");

    c.set("amp.K", paper ? "16,32,64,128,256,512,1024" : "16,32,64,128,256");
    c.set("amp.J", "10000");
    c.set("amp.c_tilde", "40,100");
    c.set("amp.method", "AM");

    c.set("density.omega_max", "8");
    c.set("density.n", "256");
    c.set("density.tv_n", "32");
    c.set("density.K", paper ? "1024" : "256");
    c.set("density.J", "10000");
    c.set("density.quad_extent", "8");
    c.set("density.quad_points", "512");

    c.set("reconstruct.K", paper ? "1024" : "256");
    c.set("reconstruct.J", paper ? "100000" : "10000");
    c.set("reconstruct.method", "AM");
    c.set("reconstruct.extent", "5");
    c.set("reconstruct.points", "101");
    c.set("reconstruct.model", "");

    c.set("trace.K", paper ? "1024" : "256");
    c.set("trace.J", "10000");
    return c;
}

SamplingPlan ExperimentConfig::hybrid_plan() const {
    if (betas.size() != fractions.size())
        throw ConfigError("sampling.betas and sampling.fractions differ in length");
    SamplingPlan plan;
    for (std::size_t i = 0; i < betas.size(); ++i) {
        LangevinConfig cfg = langevin;
        cfg.beta = betas[i];
        plan.entries.push_back({cfg, fractions[i]});
    }
    plan.validate();
    return plan;
}

SamplingPlan ExperimentConfig::single_plan() const { return SamplingPlan::single(single_beta, langevin); }

SamplingPlan ExperimentConfig::plan(const std::string& name) const {
    if (name == "hybrid") return hybrid_plan();
    if (name == "single") return single_plan();
    throw ConfigError("unknown sampling plan '" + name + "' (expected hybrid or single)");
}

RegularizationParams ExperimentConfig::regularization(long K, long J) const {
    if (!theory_scaling) return reg;
    return RegularizationParams::theory_scaling(K, J, reg.alpha1, reg.alpha2, reg.c_tilde);
}

TrainingConfig ExperimentConfig::training_for(FrequencyMethod method) const {
    TrainingConfig t = training;
    t.method = method;
    t.outer_steps = method == FrequencyMethod::AdaptiveMetropolis ? am_steps : gd_steps;
    return t;
}

namespace {

void require_nonempty(const std::string& key, std::size_t n) {
    if (n == 0) throw ConfigError("config key '" + key + "' must not be empty");
}

std::vector<long> positive_list(const KeyValueConfig& c, const std::string& key) {
    std::vector<long> v = c.get_longs(key);
    require_nonempty(key, v.size());
    for (long x : v)
        if (x < 1) throw ConfigError("config key '" + key + "' must contain positive values");
    return v;
}

long positive(const KeyValueConfig& c, const std::string& key) {
    const long v = c.get_long(key);
    if (v < 1) throw ConfigError("config key '" + key + "' must be positive");
    return v;
}

std::uint64_t parse_seed(const std::string& s) {
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(s, &used);
        if (used != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("run.seed: bad value '" + s + "'");
    }
}

} // namespace

ExperimentConfig make_experiment_config(Profile profile, const KeyValueConfig& overrides) {
    KeyValueConfig c = default_config(profile);
    for (const auto& [k, v] : overrides.entries()) {
        if (!c.has(k)) throw ConfigError("unknown config key '" + k + "'");
        if (k == "run.profile" && v != to_string(profile))
            throw ConfigError("run.profile in the config file disagrees with the selected profile");
    }
    c.merge(overrides);

    ExperimentConfig e;
    e.profile = profile;
    e.seed = parse_seed(c.get("run.seed"));
    e.out_dir = c.get("run.out");
    if (e.out_dir.empty()) throw ConfigError("run.out must not be empty");
    e.models_dir = c.get("run.models_dir").empty() ? e.out_dir / "models" : std::filesystem::path(c.get("run.models_dir"));

    e.potential.alpha = c.get_double("potential.alpha");
    e.potential.gamma = c.get_double("potential.gamma");
    e.potential.radius_a = c.get_double("potential.R_a");
    e.potential.delta_a = c.get_double("potential.delta_a");
    e.potential.radius_c = c.get_double("potential.R_c");
    e.potential.delta_c = c.get_double("potential.delta_c");
    e.potential.radius_b = c.get_double("potential.R_b");
    e.potential.delta_b = c.get_double("potential.delta_b");
    try {
        TargetPotential check(e.potential);
    } catch (const InvalidArgument& err) {
        throw ConfigError(std::string("potential: ") + err.what());
    }

    e.betas = c.get_doubles("sampling.betas");
    e.fractions = c.get_doubles("sampling.fractions");
    e.langevin.dt = c.get_double("sampling.dt");
    e.langevin.burn_in = c.get_long("sampling.burn_in");
    e.langevin.thinning = c.get_long("sampling.thinning");
    e.langevin.validate();
    e.single_beta = c.get_double("sampling.single_beta");
    e.hybrid_plan();
    e.single_plan().validate();

    e.K_list = positive_list(c, "study.K");
    e.J_list = positive_list(c, "study.J");
    e.Q = static_cast<int>(c.get_long("study.Q"));
    if (e.Q < 2) throw ConfigError("study.Q must be >= 2");
    for (const auto& m : c.get_strings("study.methods")) e.methods.push_back(parse_frequency_method(m));
    require_nonempty("study.methods", e.methods.size());

    e.reg.alpha1 = c.get_double("reg.alpha1");
    e.reg.alpha2 = c.get_double("reg.alpha2");
    e.reg.lambda1 = c.get_double("reg.lambda1");
    e.reg.lambda2 = c.get_double("reg.lambda2");
    e.reg.lambda3 = c.get_double("reg.lambda3");
    e.reg.c_tilde = c.get_double("reg.c_tilde");
    e.reg.validate();
    const std::string& scaling = c.get("reg.scaling");
    if (scaling != "fixed" && scaling != "theory")
        throw ConfigError("reg.scaling must be 'fixed' or 'theory'");
    e.theory_scaling = scaling == "theory";

    e.am_steps = static_cast<int>(positive(c, "train.am_steps"));
    e.gd_steps = static_cast<int>(positive(c, "train.gd_steps"));
    e.training.proposal_scale = c.get_double("train.proposal_scale");
    e.training.acceptance_exponent = c.get_double("train.acceptance_exponent");
    e.training.omega_learning_rate = c.get_double("train.omega_lr");
    e.training.eta_solver = parse_amplitude_solver(c.get("train.eta_solver"));
    e.training.eta_inner_steps = static_cast<int>(c.get_long("train.eta_inner_steps"));
    e.training.seed = e.seed;
    e.training.validate();
    e.train_method = parse_frequency_method(c.get("train.method"));
    e.train_K = positive(c, "train.K");
    e.train_J = positive(c, "train.J");
    e.train_data = c.get("train.data");
    e.train_plan = c.get("train.plan");
    e.plan(e.train_plan);

    e.corr.beta = c.get_double("corr.beta");
    if (!(e.corr.beta > 0.0)) throw ConfigError("corr.beta must be > 0");
    e.corr.dtau = c.get_double("corr.dtau");
    e.corr.tau_max = c.get_double("corr.tau_max");
    e.corr.M = static_cast<std::size_t>(positive(c, "corr.M"));
    e.corr.M_ref = static_cast<std::size_t>(positive(c, "corr.M_ref"));
    e.corr.dt = c.get_double("corr.dt");
    if (!(e.corr.dt > 0.0)) throw ConfigError("corr.dt must be > 0");
    e.corr.chains = static_cast<int>(positive(c, "corr.chains"));
    for (const auto& s : c.get_strings("corr.observables")) e.corr.pairs.push_back(ObservablePair::parse(s));
    require_nonempty("corr.observables", e.corr.pairs.size());
    try {
        tau_grid(e.corr.dtau, e.corr.tau_max);
    } catch (const InvalidArgument& err) {
        throw ConfigError(err.what());
    }
    e.corr_K = positive_list(c, "corr.K");
    e.corr_J = positive(c, "corr.J");
    if (e.corr.M < static_cast<std::size_t>(2 * e.Q) || e.corr.M_ref < static_cast<std::size_t>(2 * e.Q))
        throw ConfigError("corr.M and corr.M_ref must give at least 2 samples per replica");

    e.compare_K = positive_list(c, "compare.K");
    e.compare_J = positive(c, "compare.J");
    e.compare_method = parse_frequency_method(c.get("compare.method"));

    e.amp_K = positive_list(c, "amp.K");
    e.amp_J = positive(c, "amp.J");
    e.amp_c_tilde = c.get_doubles("amp.c_tilde");
    require_nonempty("amp.c_tilde", e.amp_c_tilde.size());
    for (double ct : e.amp_c_tilde)
        if (!(ct >= 0.0)) throw ConfigError("amp.c_tilde values must be >= 0");
    e.amp_method = parse_frequency_method(c.get("amp.method"));

    e.density_grid.omega_max = c.get_double("density.omega_max");
    e.density_grid.n = static_cast<int>(positive(c, "density.n"));
    e.density_tv_n = static_cast<int>(positive(c, "density.tv_n"));
    if (!(e.density_grid.omega_max > 0.0)) throw ConfigError("density.omega_max must be > 0");
    e.density_K = positive(c, "density.K");
    e.density_J = positive(c, "density.J");
    e.quadrature.extent = c.get_double("density.quad_extent");
    e.quadrature.points = static_cast<int>(c.get_long("density.quad_points"));
    if (!(e.quadrature.extent > 0.0) || e.quadrature.points < 2)
        throw ConfigError("density quadrature needs extent > 0 and at least 2 points");

    e.reconstruct_K = positive(c, "reconstruct.K");
    e.reconstruct_J = positive(c, "reconstruct.J");
    e.reconstruct_method = parse_frequency_method(c.get("reconstruct.method"));
    e.reconstruct_extent = c.get_double("reconstruct.extent");
    e.reconstruct_points = static_cast<int>(c.get_long("reconstruct.points"));
    if (!(e.reconstruct_extent > 0.0) || e.reconstruct_points < 2)
        throw ConfigError("reconstruct grid needs extent > 0 and at least 2 points");
    e.reconstruct_model = c.get("reconstruct.model");

    e.trace_K = positive(c, "trace.K");
    e.trace_J = positive(c, "trace.J");

    e.source = c;
    return e;
}

} // namespace rffmd
