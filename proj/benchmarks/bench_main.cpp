#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "wavebench/classical.hpp"
#include "wavebench/periodic_seasonal.hpp"
#include "wavebench/simulation.hpp"
#include "wavebench/uh_wavelet.hpp"
#include "wavebench/wavelet_benchmark.hpp"

using namespace wavebench;

namespace {

std::vector<double> noise(std::size_t n) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> z;
    std::vector<double> x(n);
    for (auto& v : x) {
        v = 100.0 + z(rng);
    }
    return x;
}

SimTriple replicate(int m, int k) {
    SimulationParams p;
    p.m = m;
    p.k = k;
    p.n = m * k;
    p.sigma_gamma_init.assign(static_cast<std::size_t>(k - 1), 1.0);
    return simulate(p, 1);
}

void BM_Duht(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto basis = build_uh_basis(n);
    const auto x = noise(static_cast<std::size_t>(n));
    for (auto _ : state) {
        benchmark::DoNotOptimize(iduht_values(duht(x, basis), basis));
    }
}
BENCHMARK(BM_Duht)->Arg(64)->Arg(256)->Arg(600)->Arg(4096);

void BM_Denton(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const auto sim = replicate(m, 4);
    const int h = static_cast<int>(state.range(1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(denton_benchmark(sim.obs_high, sim.obs_low, AggregationConstraint(4), {h}));
    }
}
BENCHMARK(BM_Denton)->Args({16, 1})->Args({64, 1})->Args({64, 2})->Args({256, 1});

void BM_DagumCholette(benchmark::State& state) {
    const auto sim = replicate(static_cast<int>(state.range(0)), 4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(dagum_cholette_benchmark(sim.obs_high, sim.obs_low, AggregationConstraint(4)));
    }
}
BENCHMARK(BM_DagumCholette)->Arg(16)->Arg(64)->Arg(256);

void BM_KalmanLoglik(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    const auto sim = replicate(256 / k, k);
    const PeriodicSeasonalSpec spec{k, 9.0, 1.0, 0.06, 2400.0};
    const auto model = build_periodic_model(spec);
    for (auto _ : state) {
        benchmark::DoNotOptimize(kalman_log_likelihood(model, sim.obs_high.values()));
    }
}
BENCHMARK(BM_KalmanLoglik)->Arg(4)->Arg(12);

void BM_PeriodicLoglik(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    const auto sim = replicate(256 / k, k);
    const PeriodicSeasonalSpec spec{k, 9.0, 1.0, 0.06, 2400.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(periodic_log_likelihood(spec, sim.obs_high.values()));
    }
}
BENCHMARK(BM_PeriodicLoglik)->Arg(4)->Arg(12);

void BM_WaveletPipeline(benchmark::State& state) {
    const auto sim = replicate(64, 4);
    WaveletBenchmarkConfig cfg;
    cfg.seasonal_period = state.range(0) != 0 ? std::optional<int>(4) : std::nullopt;
    for (auto _ : state) {
        benchmark::DoNotOptimize(wavelet_benchmark(sim.obs_high, sim.obs_low, AggregationConstraint(4), cfg));
    }
}
BENCHMARK(BM_WaveletPipeline)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
