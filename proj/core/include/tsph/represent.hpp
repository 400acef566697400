#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "tsph/persistence.hpp"

namespace tsph::represent {

/// Uniform abscissae lo = s_0 < s_1 < ... < s_{R-1} = hi.
struct CurveGrid {
    double lo = 0.0;
    double hi = 1.0;
    std::size_t resolution = 2;

    double abscissa(std::size_t i) const {
        return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(resolution - 1);
    }
};

struct SampledCurve {
    CurveGrid grid;
    std::vector<double> values;  // grid.resolution entries
};

struct DiagramPoint {
    double midlife = 0.0;   // (birth + death) / 2
    double halflife = 0.0;  // (death - birth) / 2, always > 0
};

struct DiagramPointSet {
    std::vector<DiagramPoint> points;
};

/// Replaces infinite deaths by `infinity_substitute`; throws when some finite
/// death exceeds the substitute. Pairs collapsing to zero persistence are
/// dropped.
persistence::PersistenceDiagram finitize(const persistence::PersistenceDiagram& d,
                                         double infinity_substitute);

/// Diagram as a multi-set of (midlife, halflife) points.
DiagramPointSet to_point_set(const persistence::PersistenceDiagram& d,
                             double infinity_substitute);

/// The landscape tent of one finite bar: t-b on [b, (b+d)/2], d-t on
/// ((b+d)/2, d], 0 elsewhere.
double landscape_fn(double birth, double death, double t);

struct SilhouetteResult {
    SampledCurve curve;
    bool empty_diagram = false;  // all-zero curve from an empty diagram
};

/// Weighted silhouette: xi(t) = sum_i w_i L_i(t) / sum_i w_i with weights
/// w_i = (d_i - b_i)^power. Infinite deaths are substituted first.
SilhouetteResult silhouette(const persistence::PersistenceDiagram& d, double power,
                            const CurveGrid& grid, double infinity_substitute);
SilhouetteResult silhouette(const persistence::PersistenceDiagram& d, double power,
                            const CurveGrid& grid);  // substitute = grid.hi

/// Betti curve: value at s is the number of pairs with b <= s <= d, counted
/// with multiplicity; infinite deaths count for every s >= b.
SampledCurve betti_curve(const persistence::PersistenceDiagram& d, const CurveGrid& grid);

/// Shannon entropy of the normalized bar lengths, in bits. When `normalized`
/// the value is divided by log2(bar count) and lies in [0, 1]; this requires
/// at least two bars. Throws on empty or non-finite diagrams.
double persistence_entropy(const persistence::PersistenceDiagram& d, bool normalized);

struct TorusRank {
    std::size_t n = 0;                         // estimated torus dimension N
    std::vector<std::uint64_t> expected_betti;  // C(N, k) for k = 0..N
};

/// Counts the prominent H1 classes: scanning bars by decreasing persistence,
/// N is the first prefix length whose last kept bar exceeds `prominence`
/// times the longest excluded one. Requires a finite diagram and
/// prominence > 1; N = 0 is a valid outcome.
TorusRank torus_rank_check(const persistence::PersistenceDiagram& h1, double prominence);

/// Replaces non-finite curve values with the median of the finite ones.
SampledCurve impute_curve_median(const SampledCurve& c);

/// Delimited text with header "s,value".
std::string curve_to_csv(const SampledCurve& c, char delimiter = ',');

}  // namespace tsph::represent
