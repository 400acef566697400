#include "tsph/rips.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace tsph::rips {

double DistanceMatrix::enclosing_radius() const {
    if (n_ <= 1) return 0.0;
    double radius = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n_; ++i) {
        double furthest = 0.0;
        for (std::size_t j = 0; j < n_; ++j)
            if (j != i) furthest = std::max(furthest, (*this)(i, j));
        radius = std::min(radius, furthest);
    }
    return radius;
}

DistanceMatrix distance_matrix(const embedding::PointCloud& pc) {
    const std::size_t n = pc.size();
    if (n == 0) throw std::invalid_argument("distance_matrix: empty point cloud");
    DistanceMatrix dm(n);
    for (std::size_t i = 1; i < n; ++i) {
        const auto pi = pc.point(i);
        for (std::size_t j = 0; j < i; ++j) {
            const auto pj = pc.point(j);
            double d2 = 0.0;
            for (std::size_t k = 0; k < pc.dim; ++k) {
                const double diff = pi[k] - pj[k];
                d2 += diff * diff;
            }
            dm.set(i, j, std::sqrt(d2));
        }
    }
    return dm;
}

void Filtration::dump(std::ostream& out) const {
    for (std::size_t i = 0; i < size(); ++i) {
        out << values[i] << ' ' << int(dims[i]);
        for (auto v : simplex(i)) out << ' ' << v;
        out << '\n';
    }
}

namespace {

// Per-dimension staging buffers; cliques are emitted in lexicographic vertex
// order within each dimension, so a stable sort by value later yields the
// (value, dim, lex) total order.
struct DimBuffer {
    std::vector<double> values;
    std::vector<std::uint32_t> vertices;  // (dim+1) entries per simplex
    std::size_t count = 0;
};

void expand_cliques(const DistanceMatrix& dm, const std::vector<std::vector<std::uint32_t>>& nbrs,
                    std::vector<std::uint32_t>& clique, double diameter,
                    const std::vector<std::uint32_t>& candidates, int max_dim,
                    std::vector<DimBuffer>& buffers) {
    for (std::size_t ci = 0; ci < candidates.size(); ++ci) {
        const std::uint32_t v = candidates[ci];
        double diam = diameter;
        for (std::uint32_t u : clique) diam = std::max(diam, dm(u, v));
        clique.push_back(v);

        auto& buf = buffers[clique.size() - 1];
        buf.values.push_back(diam);
        buf.vertices.insert(buf.vertices.end(), clique.begin(), clique.end());
        ++buf.count;

        if (int(clique.size()) <= max_dim) {
            std::vector<std::uint32_t> next;
            const auto& nv = nbrs[v];
            std::set_intersection(candidates.begin() + ci + 1, candidates.end(),
                                  std::upper_bound(nv.begin(), nv.end(), v), nv.end(),
                                  std::back_inserter(next));
            if (!next.empty()) expand_cliques(dm, nbrs, clique, diam, next, max_dim, buffers);
        }
        clique.pop_back();
    }
}

}  // namespace

Filtration rips_filtration(const DistanceMatrix& dm, int max_dim,
                           std::optional<double> max_scale) {
    if (max_dim < 0) throw std::invalid_argument("rips_filtration: max_dim must be >= 0");
    const double scale = max_scale ? *max_scale : dm.enclosing_radius();
    if (max_scale && *max_scale <= 0.0)
        throw std::invalid_argument("rips_filtration: max_scale must be positive");

    const std::size_t n = dm.size();
    std::vector<std::vector<std::uint32_t>> nbrs(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (dm(i, j) <= scale) {
                nbrs[i].push_back(std::uint32_t(j));
                nbrs[j].push_back(std::uint32_t(i));
            }

    std::vector<DimBuffer> buffers(std::size_t(max_dim) + 1);
    auto& verts = buffers[0];
    verts.count = n;
    verts.values.assign(n, 0.0);
    verts.vertices.resize(n);
    std::iota(verts.vertices.begin(), verts.vertices.end(), std::uint32_t(0));

    if (max_dim >= 1) {
        std::vector<std::uint32_t> clique;
        for (std::uint32_t i = 0; i < n; ++i) {
            const auto& ni = nbrs[i];
            auto beyond = std::upper_bound(ni.begin(), ni.end(), i);
            for (auto it = beyond; it != ni.end(); ++it) {
                const std::uint32_t j = *it;
                const double dij = dm(i, j);
                auto& edges = buffers[1];
                edges.values.push_back(dij);
                edges.vertices.push_back(i);
                edges.vertices.push_back(j);
                ++edges.count;
                if (max_dim >= 2) {
                    std::vector<std::uint32_t> cands;
                    const auto& nj = nbrs[j];
                    std::set_intersection(it + 1, ni.end(),
                                          std::upper_bound(nj.begin(), nj.end(), j), nj.end(),
                                          std::back_inserter(cands));
                    if (!cands.empty()) {
                        clique.assign({i, j});
                        expand_cliques(dm, nbrs, clique, dij, cands, max_dim, buffers);
                    }
                }
            }
        }
    }

    std::size_t total = 0;
    for (const auto& buf : buffers) total += buf.count;

    // Global order: stable sort by (value, dim); per-dim lex order is kept.
    std::vector<std::uint32_t> perm(total);
    std::iota(perm.begin(), perm.end(), std::uint32_t(0));
    std::vector<double> flat_values(total);
    std::vector<std::uint8_t> flat_dims(total);
    std::vector<std::size_t> dim_base(buffers.size() + 1, 0);
    {
        std::size_t at = 0;
        for (std::size_t d = 0; d < buffers.size(); ++d) {
            dim_base[d] = at;
            for (std::size_t i = 0; i < buffers[d].count; ++i) {
                flat_values[at] = buffers[d].values[i];
                flat_dims[at] = std::uint8_t(d);
                ++at;
            }
        }
        dim_base[buffers.size()] = at;
    }
    std::stable_sort(perm.begin(), perm.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (flat_values[a] != flat_values[b]) return flat_values[a] < flat_values[b];
        return flat_dims[a] < flat_dims[b];
    });

    Filtration f;
    f.max_dim = max_dim;
    f.max_scale = scale;
    f.vertex_count = n;
    f.values.reserve(total);
    f.dims.reserve(total);
    f.offsets.reserve(total + 1);
    f.offsets.push_back(0);
    std::size_t vertex_total = 0;
    for (const auto& buf : buffers) vertex_total += buf.vertices.size();
    f.vertices.reserve(vertex_total);
    for (std::uint32_t idx : perm) {
        const std::uint8_t d = flat_dims[idx];
        const std::size_t within = idx - dim_base[d];
        f.values.push_back(flat_values[idx]);
        f.dims.push_back(d);
        const auto* src = buffers[d].vertices.data() + within * (std::size_t(d) + 1);
        f.vertices.insert(f.vertices.end(), src, src + d + 1);
        f.offsets.push_back(f.vertices.size());
    }
    return f;
}

}  // namespace tsph::rips
