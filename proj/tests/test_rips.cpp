#include <doctest.h>

#include <cmath>
#include <map>
#include <set>
#include <tuple>
#include <sstream>

#include "test_util.hpp"
#include "tsph/rips.hpp"

using namespace tsph::rips;

namespace {

// All vertex subsets of size <= max_dim+1 whose pairwise distances fit the
// scale, with their diameters; the reference enumeration for small clouds.
std::map<std::vector<std::uint32_t>, double> brute_force_simplices(const DistanceMatrix& dm,
                                                                   int max_dim, double scale) {
    std::map<std::vector<std::uint32_t>, double> out;
    const std::size_t n = dm.size();
    for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << n); ++mask) {
        std::vector<std::uint32_t> verts;
        for (std::size_t v = 0; v < n; ++v)
            if (mask & (std::uint64_t(1) << v)) verts.push_back(std::uint32_t(v));
        if (int(verts.size()) > max_dim + 1) continue;
        double diam = 0.0;
        bool ok = true;
        for (std::size_t a = 0; a < verts.size() && ok; ++a)
            for (std::size_t b = a + 1; b < verts.size(); ++b) {
                const double d = dm(verts[a], verts[b]);
                diam = std::max(diam, d);
                if (d > scale) ok = false;
            }
        if (ok) out[verts] = diam;
    }
    return out;
}

}  // namespace

TEST_CASE("distance_matrix computes exact Euclidean distances") {
    tsph::embedding::PointCloud pc;
    pc.dim = 2;
    pc.coords = {0, 0, 3, 4};
    const auto dm = distance_matrix(pc);
    CHECK(dm(0, 1) == 5.0);
    CHECK(dm(1, 0) == 5.0);
    CHECK(dm(0, 0) == 0.0);

    tsph::embedding::PointCloud single;
    single.dim = 3;
    single.coords = {1, 2, 3};
    const auto one = distance_matrix(single);
    CHECK(one.size() == 1);
    CHECK(one(0, 0) == 0.0);

    const auto square = distance_matrix(testutil::unit_square_cloud());
    std::multiset<double> dists;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j) dists.insert(square(i, j));
    CHECK(dists == std::multiset<double>{1, 1, 1, 1, std::sqrt(2.0), std::sqrt(2.0)});

    tsph::embedding::PointCloud empty;
    CHECK_THROWS_AS(distance_matrix(empty), std::invalid_argument);
}

TEST_CASE("two-point filtration lists vertices then the edge") {
    DistanceMatrix dm(2);
    dm.set(0, 1, 1.0);
    const auto f = rips_filtration(dm, 1, 2.0);
    REQUIRE(f.size() == 3);
    CHECK(f.values[0] == 0.0);
    CHECK(f.dims[0] == 0);
    CHECK(f.values[1] == 0.0);
    CHECK(f.dims[1] == 0);
    CHECK(f.values[2] == 1.0);
    CHECK(f.dims[2] == 1);
    CHECK(f.simplex(2)[0] == 0);
    CHECK(f.simplex(2)[1] == 1);
}

TEST_CASE("unit square filtration matches brute-force enumeration") {
    const auto dm = distance_matrix(testutil::unit_square_cloud());
    const auto f = rips_filtration(dm, 2, 2.0);

    std::size_t vertices = 0, edges_one = 0, edges_diag = 0, triangles = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f.dims[i] == 0) ++vertices;
        if (f.dims[i] == 1 && f.values[i] == 1.0) ++edges_one;
        if (f.dims[i] == 1 && f.values[i] == doctest::Approx(std::sqrt(2.0))) ++edges_diag;
        if (f.dims[i] == 2) {
            ++triangles;
            CHECK(f.values[i] == doctest::Approx(std::sqrt(2.0)));
        }
    }
    CHECK(vertices == 4);
    CHECK(edges_one == 4);
    CHECK(edges_diag == 2);
    CHECK(triangles == 4);

    const auto expected = brute_force_simplices(dm, 2, 2.0);
    REQUIRE(f.size() == expected.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        const auto vs = f.simplex(i);
        const auto it = expected.find({vs.begin(), vs.end()});
        REQUIRE(it != expected.end());
        CHECK(f.values[i] == it->second);
    }
}

TEST_CASE("a tight scale keeps only the vertices") {
    const auto dm = distance_matrix(testutil::unit_square_cloud());
    const auto f = rips_filtration(dm, 2, 0.5);
    CHECK(f.size() == 4);
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(f.dims[i] == 0);
}

TEST_CASE("filtration order is (value, dim, lex) and faces precede cofaces") {
    const auto pc = testutil::random_cloud(9, 3, 77);
    const auto dm = distance_matrix(pc);
    const auto f = rips_filtration(dm, 3, std::nullopt);

    std::map<std::vector<std::uint32_t>, std::size_t> position;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const auto vs = f.simplex(i);
        position[{vs.begin(), vs.end()}] = i;
    }
    for (std::size_t i = 1; i < f.size(); ++i) {
        const auto a = f.simplex(i - 1);
        const auto b = f.simplex(i);
        const std::vector<std::uint32_t> va(a.begin(), a.end()), vb(b.begin(), b.end());
        const auto key_a = std::make_tuple(f.values[i - 1], f.dims[i - 1], va);
        const auto key_b = std::make_tuple(f.values[i], f.dims[i], vb);
        CHECK(key_a < key_b);
    }
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f.dims[i] == 0) continue;
        const auto vs = f.simplex(i);
        for (std::size_t drop = 0; drop < vs.size(); ++drop) {
            std::vector<std::uint32_t> facet;
            for (std::size_t j = 0; j < vs.size(); ++j)
                if (j != drop) facet.push_back(vs[j]);
            REQUIRE(position.count(facet) == 1);
            const std::size_t fi = position[facet];
            CHECK(fi < i);
            CHECK(f.values[fi] <= f.values[i]);  // monotone
        }
    }
}

TEST_CASE("full-scale simplex counts follow the binomial formula") {
    std::mt19937_64 rng(5);
    for (std::size_t n : {4, 6, 8}) {
        const auto pc = testutil::random_cloud(n, 2, rng());
        const auto dm = distance_matrix(pc);
        const int max_dim = 3;
        const auto f = rips_filtration(dm, max_dim, 1e9);
        std::size_t expected = 0;
        for (int j = 0; j <= max_dim; ++j) {
            std::uint64_t c = 1;
            for (int t = 0; t < j + 1; ++t) c = c * (n - t) / (t + 1);
            expected += c;
        }
        CHECK(f.size() == expected);
    }
}

TEST_CASE("default scale is the enclosing radius") {
    const auto pc = testutil::random_cloud(12, 3, 42);
    const auto dm = distance_matrix(pc);
    const auto f = rips_filtration(dm, 2);
    CHECK(f.max_scale == dm.enclosing_radius());
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(f.values[i] <= f.max_scale);

    DistanceMatrix lonely(1);
    CHECK(lonely.enclosing_radius() == 0.0);
    const auto single = rips_filtration(lonely, 2);
    CHECK(single.size() == 1);
}

TEST_CASE("rips_filtration validates its arguments") {
    DistanceMatrix dm(3);
    CHECK_THROWS_AS(rips_filtration(dm, -1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(rips_filtration(dm, 2, 0.0), std::invalid_argument);
}

TEST_CASE("dump writes one simplex per line") {
    DistanceMatrix dm(2);
    dm.set(0, 1, 0.5);
    const auto f = rips_filtration(dm, 1, 1.0);
    std::ostringstream out;
    f.dump(out);
    CHECK(out.str() == "0 0 0\n0 0 1\n0.5 1 0 1\n");
}
