#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tsph/signal.hpp"

namespace tsph::embedding {

struct WindowParams {
    std::size_t m = 0;    // window extent; points live in R^(m+1)
    std::size_t tau = 1;  // time delay
};

/// A finite list of points in R^dim, stored row-major.
struct PointCloud {
    std::size_t dim = 0;
    std::vector<double> coords;  // size() == dim * count
    std::optional<WindowParams> source_window;

    std::size_t size() const { return dim == 0 ? 0 : coords.size() / dim; }
    std::span<const double> point(std::size_t i) const {
        return {coords.data() + i * dim, dim};
    }
    double at(std::size_t i, std::size_t j) const { return coords[i * dim + j]; }
};

/// Delay embedding: point i is [t_i, t_{i+tau}, ..., t_{i+m*tau}], one point
/// per valid start index, so the cloud has n - m*tau points in R^(m+1).
/// m = 0 degenerates to the series itself as 1-D points.
PointCloud sliding_window(const signal::TimeSeries& ts, std::size_t m, std::size_t tau);

/// Subtracts from each point its coordinate mean times the all-ones vector;
/// the result is orthogonal to [1,...,1]. Idempotent.
PointCloud center(const PointCloud& pc);

struct NormalizeResult {
    PointCloud cloud;
    std::vector<std::size_t> zero_points;  // indices left at the origin
};

/// Scales every nonzero point to unit Euclidean norm; zero points stay at the
/// origin and are reported in `zero_points`.
NormalizeResult normalize_unit(const PointCloud& pc);

struct Harmonic {
    double amplitude = 1.0;
    double phase = 0.0;
};

/// Samples sum_j a_j * sin(j*L*t + phi_j) for harmonic j = 1..H on the
/// uniform grid t_i = 2*pi*i/n over [0, 2*pi).
signal::TimeSeries gen_periodic(std::size_t period_count, std::size_t n,
                                std::span<const Harmonic> harmonics,
                                std::string id = "periodic");

/// Quasi-periodic generator: point t = (l_0 e^{i w_0 t}, ..., l_L e^{i w_L t})
/// for integer t = 0..n-1, each complex circle factor realized as a real
/// (cos, sin) pair, giving points in R^(2(L+1)).
PointCloud gen_quasi_periodic(std::span<const double> omegas, std::span<const double> lambdas,
                              std::size_t n);

/// One point per row, coordinates delimiter-separated.
std::string cloud_to_csv(const PointCloud& pc, char delimiter = ',');

}  // namespace tsph::embedding
