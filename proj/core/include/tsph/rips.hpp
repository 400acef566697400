#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "tsph/embedding.hpp"

namespace tsph::rips {

/// Symmetric nonnegative distances with zero diagonal, packed lower triangle.
class DistanceMatrix {
  public:
    DistanceMatrix() = default;
    explicit DistanceMatrix(std::size_t n) : n_(n), d_(n * (n - 1) / 2, 0.0) {}

    std::size_t size() const { return n_; }

    double operator()(std::size_t i, std::size_t j) const {
        if (i == j) return 0.0;
        return d_[pack(i, j)];
    }
    void set(std::size_t i, std::size_t j, double v) { d_[pack(i, j)] = v; }

    /// min over vertices of the max distance to any other vertex; 0 for a
    /// single point. Beyond this scale the complex is a cone, so H_1 is
    /// trivial and nothing of interest is lost by truncating there.
    double enclosing_radius() const;

  private:
    static std::size_t pack(std::size_t i, std::size_t j) {
        if (i < j) std::swap(i, j);
        return i * (i - 1) / 2 + j;
    }

    std::size_t n_ = 0;
    std::vector<double> d_;
};

/// Exact pairwise Euclidean distances of a nonempty cloud.
DistanceMatrix distance_matrix(const embedding::PointCloud& pc);

/// Simplices of a filtration in reduction order: sorted by (value, dimension,
/// lexicographic vertex tuple), faces before cofaces. Stored as a structure
/// of arrays; simplex i occupies vertices[offsets[i] .. offsets[i+1]).
struct Filtration {
    std::vector<double> values;
    std::vector<std::uint8_t> dims;
    std::vector<std::uint32_t> vertices;  // ascending within each simplex
    std::vector<std::uint64_t> offsets;   // size() + 1 entries
    int max_dim = 0;
    double max_scale = 0.0;
    std::size_t vertex_count = 0;

    std::size_t size() const { return values.size(); }
    std::span<const std::uint32_t> simplex(std::size_t i) const {
        return {vertices.data() + offsets[i], offsets[i + 1] - offsets[i]};
    }

    /// Debug dump, one simplex per line: "value dim v0 v1 ...".
    void dump(std::ostream& out) const;
};

/// Vietoris-Rips filtration up to `max_dim`: every subset of k+1 <= max_dim+1
/// points with pairwise distances <= max_scale, entering at its diameter.
/// An empty `max_scale` means the enclosing radius of the matrix.
Filtration rips_filtration(const DistanceMatrix& dm, int max_dim,
                           std::optional<double> max_scale = std::nullopt);

}  // namespace tsph::rips
