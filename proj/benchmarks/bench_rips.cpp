#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <random>

#include "tsph/rips.hpp"

namespace {

tsph::embedding::PointCloud circle_cloud(std::size_t n) {
    tsph::embedding::PointCloud pc;
    pc.dim = 2;
    pc.coords.reserve(2 * n);
    std::mt19937_64 rng(4);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = 2.0 * std::numbers::pi * double(i) / double(n);
        pc.coords.push_back(std::cos(a) + 1e-3 * double(rng() % 1000));
        pc.coords.push_back(std::sin(a));
    }
    return pc;
}

}  // namespace

static void BM_distance_matrix(benchmark::State& state) {
    const auto pc = circle_cloud(std::size_t(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(tsph::rips::distance_matrix(pc));
}
BENCHMARK(BM_distance_matrix)->Arg(200)->Arg(500);

static void BM_rips_filtration(benchmark::State& state) {
    const auto dm = tsph::rips::distance_matrix(circle_cloud(std::size_t(state.range(0))));
    for (auto _ : state) {
        auto f = tsph::rips::rips_filtration(dm, 2, std::nullopt);
        benchmark::DoNotOptimize(f.size());
    }
}
BENCHMARK(BM_rips_filtration)->Arg(100)->Arg(200)->Arg(300)->Unit(benchmark::kMillisecond);
