#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <random>

#include "tsph/persistence.hpp"

namespace {

tsph::rips::Filtration circle_filtration(std::size_t n) {
    tsph::embedding::PointCloud pc;
    pc.dim = 2;
    std::mt19937_64 rng(9);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = 2.0 * std::numbers::pi * double(i) / double(n);
        pc.coords.push_back(std::cos(a) + 1e-4 * double(rng() % 97));
        pc.coords.push_back(std::sin(a) + 1e-4 * double(rng() % 97));
    }
    return tsph::rips::rips_filtration(tsph::rips::distance_matrix(pc), 2, std::nullopt);
}

}  // namespace

static void BM_reduce(benchmark::State& state) {
    const auto f = circle_filtration(std::size_t(state.range(0)));
    const tsph::persistence::FieldSpec field;
    for (auto _ : state) {
        auto r = tsph::persistence::reduce(f, field);
        benchmark::DoNotOptimize(r.diagrams.size());
    }
    state.counters["simplices"] = double(f.size());
}
BENCHMARK(BM_reduce)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

static void BM_h0_unionfind(benchmark::State& state) {
    tsph::embedding::PointCloud pc;
    pc.dim = 3;
    std::mt19937_64 rng(11);
    for (int i = 0; i < 3 * state.range(0); ++i)
        pc.coords.push_back(double(rng() % 10000) / 10000.0);
    const auto dm = tsph::rips::distance_matrix(pc);
    for (auto _ : state)
        benchmark::DoNotOptimize(tsph::persistence::h0_unionfind(dm, std::nullopt));
}
BENCHMARK(BM_h0_unionfind)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);
