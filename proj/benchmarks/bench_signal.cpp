#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "tsph/signal.hpp"

namespace {

tsph::signal::TimeSeries sine(std::size_t n, double period) {
    tsph::signal::TimeSeries ts;
    ts.id = "bench";
    ts.values.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        ts.values[i] = std::sin(2.0 * std::numbers::pi * double(i) / period);
    ts.missing.assign(n, false);
    return ts;
}

}  // namespace

static void BM_mutual_information_profile(benchmark::State& state) {
    const auto ts = sine(std::size_t(state.range(0)), 100.0);
    const auto bins = tsph::signal::choose_bin_size(ts);
    for (auto _ : state) {
        double acc = 0.0;
        for (std::size_t tau = 1; tau <= 50; ++tau)
            acc += tsph::signal::mutual_information(ts, tau, bins);
        benchmark::DoNotOptimize(acc);
    }
}
BENCHMARK(BM_mutual_information_profile)->Arg(1000)->Arg(5000);

static void BM_fnn_fraction(benchmark::State& state) {
    const auto ts = sine(std::size_t(state.range(0)), 64.0);
    const double eps = tsph::signal::fnn_default_epsilon(ts);
    for (auto _ : state)
        benchmark::DoNotOptimize(tsph::signal::fnn_fraction(ts, 3, 16, eps));
}
BENCHMARK(BM_fnn_fraction)->Arg(512)->Arg(2048);

static void BM_sample_windows(benchmark::State& state) {
    const auto ts = sine(20000, 100.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(tsph::signal::sample_windows(ts, 500, 50, 7));
}
BENCHMARK(BM_sample_windows);

BENCHMARK_MAIN();
