#include <map>

#include <benchmark/benchmark.h>

#include "rffmd/dynamics.hpp"
#include "rffmd/frequency_training.hpp"
#include "rffmd/langevin.hpp"
#include "rffmd/normal_equations.hpp"

using namespace rffmd;

namespace {

const Dataset& shared_data(long J) {
    static std::map<long, Dataset> cache;
    auto it = cache.find(J);
    if (it == cache.end())
        it = cache.emplace(J, sample_dataset(TargetPotential{}, SamplingPlan::hybrid(), J, 11)).first;
    return it->second;
}

FourierFeatureModel random_model(long K) {
    const Eigen::MatrixXd w = initial_frequencies(K, 2, 5);
    Eigen::VectorXcd eta = Eigen::VectorXcd::Random(K) / static_cast<double>(K);
    return FourierFeatureModel(w, eta);
}

} // namespace

static void BM_GramAssembly(benchmark::State& state) {
    const long K = state.range(0);
    const Dataset& d = shared_data(state.range(1));
    const Eigen::MatrixXd w = initial_frequencies(K, 2, 3);
    for (auto _ : state) benchmark::DoNotOptimize(build_normal_equations(w, d, RegularizationParams{}));
    state.SetItemsProcessed(state.iterations() * d.size() * K * K);
}
BENCHMARK(BM_GramAssembly)->Args({64, 10000})->Args({256, 10000})->Unit(benchmark::kMillisecond);

static void BM_ModelEvalReal(benchmark::State& state) {
    const FourierFeatureModel m = random_model(state.range(0));
    Vec2 x(0.3, -0.7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(m.eval_real(x));
        x[0] += 1e-9;
    }
}
BENCHMARK(BM_ModelEvalReal)->Arg(16)->Arg(256)->Arg(1024);

static void BM_VerletReconstructed(benchmark::State& state) {
    const ReconstructedPotential vr(random_model(state.range(0)), TargetPotential{});
    PhaseState z{Vec2(0.5, 0.1), Vec2(0.2, -0.3)};
    for (auto _ : state) {
        z = verlet_step(z, vr, 5e-3);
        benchmark::DoNotOptimize(z);
    }
}
BENCHMARK(BM_VerletReconstructed)->Arg(16)->Arg(256);

static void BM_LangevinTarget(benchmark::State& state) {
    const TargetPotential V;
    LangevinConfig cfg;
    cfg.seed = 9;
    LangevinChain chain(V, cfg);
    for (auto _ : state) {
        chain.step();
        benchmark::DoNotOptimize(chain.position());
    }
}
BENCHMARK(BM_LangevinTarget);
BENCHMARK_MAIN();
