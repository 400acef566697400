#include "tsph/represent.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace tsph::represent {

namespace {

void check_grid(const CurveGrid& g) {
    if (!(g.hi > g.lo) || g.resolution < 2)
        throw std::invalid_argument("CurveGrid: require hi > lo and resolution >= 2");
}

double max_finite_death(const persistence::PersistenceDiagram& d) {
    double mx = -std::numeric_limits<double>::infinity();
    for (const auto& p : d.pairs)
        if (!p.essential()) mx = std::max(mx, p.death);
    return mx;
}

}  // namespace

persistence::PersistenceDiagram finitize(const persistence::PersistenceDiagram& d,
                                         double infinity_substitute) {
    if (!std::isfinite(infinity_substitute))
        throw std::invalid_argument("finitize: substitute must be finite");
    if (max_finite_death(d) > infinity_substitute)
        throw std::invalid_argument("finitize: substitute smaller than a finite death");
    persistence::PersistenceDiagram out;
    out.dim = d.dim;
    out.pairs.reserve(d.pairs.size());
    for (const auto& p : d.pairs) {
        const double death = p.essential() ? infinity_substitute : p.death;
        if (death > p.birth) out.pairs.push_back({p.birth, death});
    }
    return out;
}

DiagramPointSet to_point_set(const persistence::PersistenceDiagram& d,
                             double infinity_substitute) {
    const auto finite = finitize(d, infinity_substitute);
    DiagramPointSet ps;
    ps.points.reserve(finite.pairs.size());
    for (const auto& p : finite.pairs)
        ps.points.push_back({0.5 * (p.birth + p.death), 0.5 * (p.death - p.birth)});
    return ps;
}

double landscape_fn(double birth, double death, double t) {
    if (!(birth <= death) || !std::isfinite(death))
        throw std::invalid_argument("landscape_fn: need a finite bar with birth <= death");
    const double mid = 0.5 * (birth + death);
    if (t < birth || t > death) return 0.0;
    return t <= mid ? t - birth : death - t;
}

SilhouetteResult silhouette(const persistence::PersistenceDiagram& d, double power,
                            const CurveGrid& grid, double infinity_substitute) {
    check_grid(grid);
    if (!(power > 0.0) || power > 64.0)
        throw std::invalid_argument("silhouette: power must lie in (0, 64]");
    const auto finite = finitize(d, infinity_substitute);

    SilhouetteResult res;
    res.curve.grid = grid;
    res.curve.values.assign(grid.resolution, 0.0);
    if (finite.pairs.empty()) {
        res.empty_diagram = true;
        return res;
    }
    std::vector<double> weights;
    weights.reserve(finite.pairs.size());
    double weight_sum = 0.0;
    for (const auto& p : finite.pairs) {
        const double w = std::pow(p.death - p.birth, power);
        weights.push_back(w);
        weight_sum += w;
    }
    for (std::size_t i = 0; i < grid.resolution; ++i) {
        const double t = grid.abscissa(i);
        double acc = 0.0;
        for (std::size_t b = 0; b < finite.pairs.size(); ++b)
            acc += weights[b] * landscape_fn(finite.pairs[b].birth, finite.pairs[b].death, t);
        res.curve.values[i] = acc / weight_sum;
    }
    return res;
}

SilhouetteResult silhouette(const persistence::PersistenceDiagram& d, double power,
                            const CurveGrid& grid) {
    return silhouette(d, power, grid, grid.hi);
}

SampledCurve betti_curve(const persistence::PersistenceDiagram& d, const CurveGrid& grid) {
    check_grid(grid);
    std::vector<double> births, deaths;  // finite deaths only
    births.reserve(d.pairs.size());
    for (const auto& p : d.pairs) {
        births.push_back(p.birth);
        if (!p.essential()) deaths.push_back(p.death);
    }
    std::sort(births.begin(), births.end());
    std::sort(deaths.begin(), deaths.end());

    SampledCurve curve;
    curve.grid = grid;
    curve.values.reserve(grid.resolution);
    for (std::size_t i = 0; i < grid.resolution; ++i) {
        const double s = grid.abscissa(i);
        // alive at s: birth <= s and s <= death (death inclusive)
        const auto born = std::upper_bound(births.begin(), births.end(), s) - births.begin();
        const auto dead = std::lower_bound(deaths.begin(), deaths.end(), s) - deaths.begin();
        curve.values.push_back(double(born - dead));
    }
    return curve;
}

double persistence_entropy(const persistence::PersistenceDiagram& d, bool normalized) {
    if (d.pairs.empty()) throw std::invalid_argument("persistence_entropy: empty diagram");
    double total = 0.0;
    for (const auto& p : d.pairs) {
        if (p.essential())
            throw std::invalid_argument("persistence_entropy: infinite bar; finitize first");
        total += p.death - p.birth;
    }
    if (normalized && d.pairs.size() < 2)
        throw std::invalid_argument("persistence_entropy: normalization needs >= 2 bars");
    double h = 0.0;
    for (const auto& p : d.pairs) {
        const double q = (p.death - p.birth) / total;
        h -= q * std::log2(q);
    }
    if (normalized) h /= std::log2(double(d.pairs.size()));
    return h;
}

TorusRank torus_rank_check(const persistence::PersistenceDiagram& h1, double prominence) {
    if (!(prominence > 1.0)) throw std::invalid_argument("torus_rank_check: prominence must be > 1");
    std::vector<double> lengths;
    lengths.reserve(h1.pairs.size());
    for (const auto& p : h1.pairs) {
        if (p.essential())
            throw std::invalid_argument("torus_rank_check: infinite bar; finitize first");
        lengths.push_back(p.death - p.birth);
    }
    std::sort(lengths.begin(), lengths.end(), std::greater<>());

    TorusRank tr;
    for (std::size_t k = 0; k < lengths.size(); ++k) {
        const double next = k + 1 < lengths.size() ? lengths[k + 1] : 0.0;
        if (lengths[k] > prominence * next) {
            tr.n = k + 1;
            break;
        }
    }
    tr.expected_betti.resize(tr.n + 1);
    for (std::size_t k = 0; k <= tr.n; ++k) {
        // C(N, k) on small N
        std::uint64_t c = 1;
        for (std::size_t j = 0; j < k; ++j) c = c * (tr.n - j) / (j + 1);
        tr.expected_betti[k] = c;
    }
    return tr;
}

SampledCurve impute_curve_median(const SampledCurve& c) {
    std::vector<double> finite;
    finite.reserve(c.values.size());
    for (double v : c.values)
        if (std::isfinite(v)) finite.push_back(v);
    if (finite.empty()) throw std::runtime_error("impute_curve_median: no finite values");
    std::sort(finite.begin(), finite.end());
    const std::size_t n = finite.size();
    const double med = n % 2 == 1 ? finite[n / 2] : 0.5 * (finite[n / 2 - 1] + finite[n / 2]);
    SampledCurve out = c;
    for (double& v : out.values)
        if (!std::isfinite(v)) v = med;
    return out;
}

std::string curve_to_csv(const SampledCurve& c, char delimiter) {
    std::string out = "s";
    out.push_back(delimiter);
    out += "value\n";
    char buf[64];
    for (std::size_t i = 0; i < c.values.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", c.grid.abscissa(i));
        out += buf;
        out.push_back(delimiter);
        std::snprintf(buf, sizeof buf, "%.17g", c.values[i]);
        out += buf;
        out.push_back('\n');
    }
    return out;
}

}  // namespace tsph::represent
