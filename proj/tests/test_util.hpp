#pragma once

// Deterministic generators shared by the test suites. Distributions are
// hand-rolled (rejection sampling, Box-Muller) so seeded values do not depend
// on the standard library's implementation-defined distributions.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "tsph/embedding.hpp"
#include "tsph/signal.hpp"

namespace testutil {

inline double uniform01(std::mt19937_64& rng) {
    return double(rng() >> 11) * 0x1.0p-53;
}

inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

inline double gaussian(std::mt19937_64& rng) {
    double u1;
    do {
        u1 = uniform01(rng);
    } while (u1 <= 0.0);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

inline tsph::signal::TimeSeries make_series(std::vector<double> values, std::string id = "test") {
    tsph::signal::TimeSeries ts;
    ts.id = std::move(id);
    ts.missing.assign(values.size(), false);
    ts.values = std::move(values);
    return ts;
}

inline tsph::signal::TimeSeries sine_series(std::size_t n, double period, double amplitude = 1.0,
                                            double phase = 0.0, std::string id = "sine") {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = amplitude * std::sin(2.0 * std::numbers::pi * double(i) / period + phase);
    return make_series(std::move(v), std::move(id));
}

inline tsph::signal::TimeSeries uniform_noise_series(std::size_t n, std::uint64_t seed,
                                                     std::string id = "noise") {
    std::mt19937_64 rng(seed);
    std::vector<double> v(n);
    for (auto& x : v) x = uniform01(rng);
    return make_series(std::move(v), std::move(id));
}

inline tsph::embedding::PointCloud random_cloud(std::size_t n, std::size_t dim,
                                                std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    tsph::embedding::PointCloud pc;
    pc.dim = dim;
    pc.coords.resize(n * dim);
    for (auto& c : pc.coords) c = uniform01(rng);
    return pc;
}

inline tsph::embedding::PointCloud noisy_circle_cloud(std::size_t n, double noise_sigma,
                                                      std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    tsph::embedding::PointCloud pc;
    pc.dim = 2;
    pc.coords.reserve(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        const double angle = 2.0 * std::numbers::pi * uniform01(rng);
        pc.coords.push_back(std::cos(angle) + noise_sigma * gaussian(rng));
        pc.coords.push_back(std::sin(angle) + noise_sigma * gaussian(rng));
    }
    return pc;
}

inline tsph::embedding::PointCloud unit_square_cloud() {
    tsph::embedding::PointCloud pc;
    pc.dim = 2;
    pc.coords = {0, 0, 1, 0, 0, 1, 1, 1};
    return pc;
}

}  // namespace testutil
