// Microbenchmarks for the hot paths: the split objective, the per-mode
// allocation search, the grid oracle, and whole-network throughput.
#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "hknet/channel.hpp"
#include "hknet/geometry.hpp"
#include "hknet/optimizer.hpp"
#include "hknet/rng.hpp"

namespace {

using namespace hknet;

constexpr PowerBudget kUnit{1.0, 1.0, 1.0};

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

// First sampled instance of the requested mode under the usual
// log-uniform link distribution, so runs are comparable across builds.
ChannelGains instance_of(InterferenceMode mode) {
    SplitMix64 rng(4242u);
    for (;;) {
        auto draw = [&] {
            return db_to_linear(-20.0 + 60.0 * rng.uniform01());
        };
        const ChannelGains g{draw(), draw(), draw(), draw()};
        if (classify_mode(link_budget(g, kUnit)) == mode) return g;
    }
}

void bench_split_objective(benchmark::State& state) {
    const ChannelGains g = instance_of(InterferenceMode::weak);
    double x = 0.0;
    for (auto _ : state) {
        x += 1e-6;
        if (x > 1.0) x = 0.0;
        benchmark::DoNotOptimize(
            detail::split_sum_rate_fast(g, kUnit, x, 1.0 - x));
    }
}
BENCHMARK(bench_split_objective);

void bench_optimize(benchmark::State& state) {
    const auto mode = static_cast<InterferenceMode>(state.range(0));
    const ChannelGains g = instance_of(mode);
    for (auto _ : state) {
        benchmark::DoNotOptimize(optimize(g, kUnit));
    }
}
BENCHMARK(bench_optimize)
    ->DenseRange(static_cast<int>(InterferenceMode::very_strong),
                 static_cast<int>(InterferenceMode::very_weak));

void bench_grid_oracle(benchmark::State& state) {
    const ChannelGains g = instance_of(InterferenceMode::weak);
    for (auto _ : state) {
        benchmark::DoNotOptimize(brute_force_split(g, kUnit, 256));
    }
}
BENCHMARK(bench_grid_oracle);

void bench_network_throughput(benchmark::State& state) {
    const NetworkConfig cfg{};
    NetworkLayout layout;
    layout.mue = {2.0 * cfg.cell_radius_m / 3.0, 0.0};
    layout.saps = place_saps_grid(cfg, 10, derive_seed(7, 10, 0));
    for (std::size_t k = 0; k < layout.saps.size(); ++k) {
        layout.sues.push_back(
            place_sue(layout.saps[k], cfg, derive_seed(7, 10, k + 1)));
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(network_throughput(layout, cfg));
    }
}
BENCHMARK(bench_network_throughput);

}  // namespace

BENCHMARK_MAIN();
