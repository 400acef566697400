#include "tsph/persistence.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace tsph::persistence {

namespace {

constexpr std::size_t kMaxVerticesPerSimplex = 16;

// Key for facet lookups: the sorted vertex tuple of a simplex.
struct SimplexKey {
    std::array<std::uint32_t, kMaxVerticesPerSimplex> v{};
    std::uint8_t len = 0;

    bool operator==(const SimplexKey& o) const {
        if (len != o.len) return false;
        return std::equal(v.begin(), v.begin() + len, o.v.begin());
    }
};

struct SimplexKeyHash {
    std::size_t operator()(const SimplexKey& k) const {
        std::uint64_t h = 1469598103934665603ull;
        for (std::uint8_t i = 0; i < k.len; ++i) {
            h ^= k.v[i];
            h *= 1099511628211ull;
        }
        return std::size_t(h);
    }
};

struct ColumnEntry {
    std::uint32_t row;
    std::uint32_t coeff;  // in (0, p)
};

using Column = std::vector<ColumnEntry>;  // rows ascending

// target := target - factor * source (mod p), by sorted merge.
void subtract_scaled(Column& target, const Column& source, std::uint64_t factor,
                     const FieldSpec& field, Column& scratch) {
    scratch.clear();
    scratch.reserve(target.size() + source.size());
    std::size_t a = 0, b = 0;
    while (a < target.size() || b < source.size()) {
        if (b == source.size() || (a < target.size() && target[a].row < source[b].row)) {
            scratch.push_back(target[a++]);
        } else if (a == target.size() || source[b].row < target[a].row) {
            const std::uint64_t c = field.neg(field.mul(factor, source[b].coeff));
            if (c != 0) scratch.push_back({source[b].row, std::uint32_t(c)});
            ++b;
        } else {
            const std::uint64_t c =
                field.sub(target[a].coeff, field.mul(factor, source[b].coeff));
            if (c != 0) scratch.push_back({target[a].row, std::uint32_t(c)});
            ++a;
            ++b;
        }
    }
    target.swap(scratch);
}

}  // namespace

ReduceResult reduce(const rips::Filtration& f, const FieldSpec& field) {
    const std::size_t m = f.size();
    if (m > std::size_t(std::numeric_limits<std::uint32_t>::max()))
        throw std::invalid_argument("reduce: filtration too large");

    int top_dim = 0;
    for (std::size_t i = 0; i < m; ++i) top_dim = std::max(top_dim, int(f.dims[i]));
    const int out_dims = std::max(f.max_dim, 1);

    // Facet index map over every simplex that can appear as a face.
    std::unordered_map<SimplexKey, std::uint32_t, SimplexKeyHash> index_of;
    {
        std::size_t facet_candidates = 0;
        for (std::size_t i = 0; i < m; ++i)
            if (int(f.dims[i]) < top_dim) ++facet_candidates;
        index_of.reserve(facet_candidates * 2);
    }
    auto key_of = [&](std::size_t i) {
        const auto vs = f.simplex(i);
        if (vs.size() > kMaxVerticesPerSimplex)
            throw std::invalid_argument("reduce: simplex dimension too large");
        SimplexKey k;
        k.len = std::uint8_t(vs.size());
        std::copy(vs.begin(), vs.end(), k.v.begin());
        return k;
    };

    // Validation pass: faces must exist, precede their cofaces, and carry no
    // larger filtration value.
    for (std::size_t i = 0; i < m; ++i) {
        const auto vs = f.simplex(i);
        if (vs.size() != std::size_t(f.dims[i]) + 1)
            throw std::invalid_argument("reduce: simplex vertex count does not match dimension");
        if (!std::is_sorted(vs.begin(), vs.end()) ||
            std::adjacent_find(vs.begin(), vs.end()) != vs.end())
            throw std::invalid_argument("reduce: simplex vertices must be strictly ascending");
        if (f.dims[i] > 0) {
            SimplexKey k = key_of(i);
            for (std::uint8_t drop = 0; drop < k.len; ++drop) {
                SimplexKey facet;
                facet.len = std::uint8_t(k.len - 1);
                std::uint8_t at = 0;
                for (std::uint8_t j = 0; j < k.len; ++j)
                    if (j != drop) facet.v[at++] = k.v[j];
                auto it = index_of.find(facet);
                if (it == index_of.end() || it->second >= i)
                    throw std::invalid_argument("reduce: non-monotone filtration (face after coface)");
                if (f.values[it->second] > f.values[i])
                    throw std::invalid_argument("reduce: non-monotone filtration values");
            }
        }
        if (int(f.dims[i]) < top_dim) {
            if (!index_of.emplace(key_of(i), std::uint32_t(i)).second)
                throw std::invalid_argument("reduce: duplicate simplex");
        }
    }

    ReduceResult result;
    result.diagrams.resize(out_dims);
    for (int k = 0; k < out_dims; ++k) result.diagrams[k].dim = k;

    std::vector<std::uint8_t> killed(m, 0);    // simplex's class died (paired as birth)
    std::vector<std::uint8_t> negative(m, 0);  // simplex kills a class
    std::vector<std::uint32_t> owner(m, std::uint32_t(-1));
    std::vector<Column> stored;
    Column boundary, scratch;

    for (int k = top_dim; k >= 1; --k) {
        std::fill(owner.begin(), owner.end(), std::uint32_t(-1));
        stored.clear();
        for (std::size_t j = 0; j < m; ++j) {
            if (int(f.dims[j]) != k) continue;
            if (killed[j]) continue;  // cleared: known creator from the round above

            boundary.clear();
            {
                SimplexKey key = key_of(j);
                for (std::uint8_t drop = 0; drop < key.len; ++drop) {
                    SimplexKey facet;
                    facet.len = std::uint8_t(key.len - 1);
                    std::uint8_t at = 0;
                    for (std::uint8_t t = 0; t < key.len; ++t)
                        if (t != drop) facet.v[at++] = key.v[t];
                    const std::uint32_t row = index_of.at(facet);
                    const std::uint32_t coeff =
                        drop % 2 == 0 ? 1 : std::uint32_t(field.neg(1));
                    boundary.push_back({row, coeff});
                }
                std::sort(boundary.begin(), boundary.end(),
                          [](const ColumnEntry& a, const ColumnEntry& b) { return a.row < b.row; });
            }

            while (!boundary.empty()) {
                const std::uint32_t pivot = boundary.back().row;
                const std::uint32_t other = owner[pivot];
                if (other == std::uint32_t(-1)) {
                    owner[pivot] = std::uint32_t(stored.size());
                    negative[j] = 1;
                    killed[pivot] = 1;
                    const double birth = f.values[pivot];
                    const double death = f.values[j];
                    if (birth == death) {
                        ++result.diagnostics.zero_persistence_pairs;
                    } else {
                        result.diagrams[k - 1].pairs.push_back({birth, death});
                    }
                    stored.push_back(std::move(boundary));
                    boundary = Column{};
                    break;
                }
                const Column& source = stored[other];
                const std::uint64_t factor =
                    field.mul(boundary.back().coeff, field.inv(source.back().coeff));
                subtract_scaled(boundary, source, factor, field, scratch);
                ++result.diagnostics.column_additions;
            }
        }
    }

    // Unpaired creators are essential classes.
    for (std::size_t i = 0; i < m; ++i) {
        if (killed[i] || negative[i]) continue;
        const int k = int(f.dims[i]);
        if (k < out_dims)
            result.diagrams[k].pairs.push_back({f.values[i], kInfiniteDeath});
        else
            ++result.diagnostics.top_dim_unpaired;
    }

    for (auto& diagram : result.diagrams)
        std::sort(diagram.pairs.begin(), diagram.pairs.end(),
                  [](const PersistencePair& a, const PersistencePair& b) {
                      if (a.birth != b.birth) return a.birth < b.birth;
                      return a.death < b.death;
                  });
    return result;
}

namespace {

struct UnionFind {
    std::vector<std::uint32_t> parent;

    explicit UnionFind(std::size_t n) : parent(n) {
        for (std::size_t i = 0; i < n; ++i) parent[i] = std::uint32_t(i);
    }
    std::uint32_t find(std::uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];  // path halving
            x = parent[x];
        }
        return x;
    }
    bool merge(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (a < b) std::swap(a, b);  // keep the smaller root
        parent[a] = b;
        return true;
    }
};

}  // namespace

PersistenceDiagram h0_unionfind(const rips::DistanceMatrix& dm, std::optional<double> max_scale) {
    const double scale = max_scale ? *max_scale : dm.enclosing_radius();
    const std::size_t n = dm.size();

    struct Edge {
        double d;
        std::uint32_t i, j;
    };
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (dm(i, j) <= scale) edges.push_back({dm(i, j), std::uint32_t(i), std::uint32_t(j)});
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        if (a.d != b.d) return a.d < b.d;
        if (a.i != b.i) return a.i < b.i;
        return a.j < b.j;
    });

    PersistenceDiagram diagram;
    diagram.dim = 0;
    UnionFind uf(n);
    std::size_t components = n;
    for (const Edge& e : edges) {
        if (!uf.merge(e.i, e.j)) continue;
        --components;
        if (e.d > 0.0) diagram.pairs.push_back({0.0, e.d});  // zero-persistence pairs dropped
    }
    for (std::size_t c = 0; c < components; ++c) diagram.pairs.push_back({0.0, kInfiniteDeath});
    std::sort(diagram.pairs.begin(), diagram.pairs.end(),
              [](const PersistencePair& a, const PersistencePair& b) {
                  if (a.birth != b.birth) return a.birth < b.birth;
                  return a.death < b.death;
              });
    return diagram;
}

}  // namespace tsph::persistence
