#include "tsph/embedding.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

namespace tsph::embedding {

PointCloud sliding_window(const signal::TimeSeries& ts, std::size_t m, std::size_t tau) {
    if (ts.has_missing())
        throw std::invalid_argument("sliding_window: series has missing values; impute first");
    if (tau < 1) throw std::invalid_argument("sliding_window: tau must be >= 1");
    const std::size_t n = ts.size();
    if (n < m * tau + 1) throw std::invalid_argument("sliding_window: series too short for (m, tau)");

    PointCloud pc;
    pc.dim = m + 1;
    pc.source_window = WindowParams{m, tau};
    const std::size_t count = n - m * tau;
    pc.coords.reserve(count * pc.dim);
    for (std::size_t i = 0; i < count; ++i)
        for (std::size_t j = 0; j <= m; ++j) pc.coords.push_back(ts.values[i + j * tau]);
    return pc;
}

PointCloud center(const PointCloud& pc) {
    if (pc.size() == 0) throw std::invalid_argument("center: empty point cloud");
    PointCloud out = pc;
    const std::size_t d = pc.dim;
    for (std::size_t i = 0; i < pc.size(); ++i) {
        double mean = 0.0;
        for (std::size_t j = 0; j < d; ++j) mean += out.coords[i * d + j];
        mean /= double(d);
        for (std::size_t j = 0; j < d; ++j) out.coords[i * d + j] -= mean;
    }
    return out;
}

NormalizeResult normalize_unit(const PointCloud& pc) {
    if (pc.size() == 0) throw std::invalid_argument("normalize_unit: empty point cloud");
    NormalizeResult res;
    res.cloud = pc;
    const std::size_t d = pc.dim;
    for (std::size_t i = 0; i < pc.size(); ++i) {
        double norm2 = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            const double c = res.cloud.coords[i * d + j];
            norm2 += c * c;
        }
        if (norm2 == 0.0) {
            res.zero_points.push_back(i);
            continue;
        }
        const double inv = 1.0 / std::sqrt(norm2);
        for (std::size_t j = 0; j < d; ++j) res.cloud.coords[i * d + j] *= inv;
    }
    return res;
}

signal::TimeSeries gen_periodic(std::size_t period_count, std::size_t n,
                                std::span<const Harmonic> harmonics, std::string id) {
    if (period_count < 1) throw std::invalid_argument("gen_periodic: period count must be >= 1");
    if (n < 2) throw std::invalid_argument("gen_periodic: need at least 2 samples");
    if (harmonics.empty()) throw std::invalid_argument("gen_periodic: empty harmonic list");

    signal::TimeSeries ts;
    ts.id = std::move(id);
    ts.values.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = 2.0 * std::numbers::pi * double(i) / double(n);
        double v = 0.0;
        for (std::size_t h = 0; h < harmonics.size(); ++h)
            v += harmonics[h].amplitude *
                 std::sin(double((h + 1) * period_count) * t + harmonics[h].phase);
        ts.values.push_back(v);
    }
    ts.missing.assign(n, false);
    return ts;
}

PointCloud gen_quasi_periodic(std::span<const double> omegas, std::span<const double> lambdas,
                              std::size_t n) {
    if (omegas.size() != lambdas.size())
        throw std::invalid_argument("gen_quasi_periodic: omega/lambda length mismatch");
    if (omegas.empty()) throw std::invalid_argument("gen_quasi_periodic: empty frequency list");
    if (n < 1) throw std::invalid_argument("gen_quasi_periodic: need at least 1 sample");

    PointCloud pc;
    pc.dim = 2 * omegas.size();
    pc.coords.reserve(n * pc.dim);
    for (std::size_t t = 0; t < n; ++t)
        for (std::size_t l = 0; l < omegas.size(); ++l) {
            const double angle = omegas[l] * double(t);
            pc.coords.push_back(lambdas[l] * std::cos(angle));
            pc.coords.push_back(lambdas[l] * std::sin(angle));
        }
    return pc;
}

std::string cloud_to_csv(const PointCloud& pc, char delimiter) {
    std::string out;
    char buf[64];
    for (std::size_t i = 0; i < pc.size(); ++i) {
        for (std::size_t j = 0; j < pc.dim; ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", pc.at(i, j));
            if (j) out.push_back(delimiter);
            out += buf;
        }
        out.push_back('\n');
    }
    return out;
}

}  // namespace tsph::embedding
