// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Runs the full stack end to end with pinned tolerances.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <vector>

#include "oracle_reduction.hpp"
#include "test_util.hpp"
#include "tsph/pipeline.hpp"
#include "tsph/represent.hpp"
#include "tsph/serialize.hpp"

using namespace tsph;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

double elapsed(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void report(const char* name, bool pass, double seconds, const std::string& detail = "") {
    std::printf("%s  %-28s (%6.1fs)%s%s\n", pass ? "PASS" : "FAIL", name, seconds,
                detail.empty() ? "" : "  ", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string fmt(const char* format, ...) {
    char buf[256];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    return buf;
}

embedding::PointCloud translate_to_centroid(const embedding::PointCloud& pc) {
    embedding::PointCloud out = pc;
    std::vector<double> mean(pc.dim, 0.0);
    for (std::size_t i = 0; i < pc.size(); ++i)
        for (std::size_t j = 0; j < pc.dim; ++j) mean[j] += pc.at(i, j);
    for (auto& m : mean) m /= double(pc.size());
    for (std::size_t i = 0; i < pc.size(); ++i)
        for (std::size_t j = 0; j < pc.dim; ++j) out.coords[i * pc.dim + j] -= mean[j];
    return out;
}

// Clouds shared between the oracle-equivalence and union-find criteria.
std::vector<embedding::PointCloud> g_small_clouds;

void criterion_oracle_equivalence() {
    const auto start = Clock::now();
    const persistence::FieldSpec field;
    std::mt19937_64 rng(0xACCE97);
    std::size_t mismatches = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 4 + testutil::uniform_below(rng, 9);  // 4..12 points
        const std::size_t d = 2 + testutil::uniform_below(rng, 5);  // ambient 2..6
        auto pc = testutil::random_cloud(n, d, rng());
        const auto f = rips::rips_filtration(rips::distance_matrix(pc), 2, std::nullopt);
        const auto fast = persistence::reduce(f, field);
        const auto slow = testoracle::naive_reduce(f, field.modulus());
        for (std::size_t k = 0; k < slow.size(); ++k)
            if (!testoracle::diagrams_equal(fast.diagrams[k], slow[k])) ++mismatches;
        g_small_clouds.push_back(std::move(pc));
    }
    const double secs = elapsed(start);
    report("oracle equivalence", mismatches == 0 && secs < 60.0, secs,
           fmt("200 clouds, %zu mismatching diagrams", mismatches));
}

void criterion_unit_square() {
    const auto start = Clock::now();
    const auto dm = rips::distance_matrix(testutil::unit_square_cloud());
    const auto result =
        persistence::reduce(rips::rips_filtration(dm, 2, 2.0), persistence::FieldSpec{});
    const auto& h0 = result.diagrams[0].pairs;
    const auto& h1 = result.diagrams[1].pairs;
    bool pass = h0.size() == 4 && h1.size() == 1;
    if (pass) {
        for (int i = 0; i < 3; ++i) pass = pass && h0[i].birth == 0.0 && h0[i].death == 1.0;
        pass = pass && h0[3].essential();
        pass = pass && std::abs(h1[0].birth - 1.0) <= 1e-9 &&
               std::abs(h1[0].death - std::numbers::sqrt2) <= 1e-9;
    }
    report("unit square diagrams", pass, elapsed(start),
           fmt("h0 bars %zu, h1 bars %zu", h0.size(), h1.size()));
}

void criterion_circle() {
    const auto start = Clock::now();
    const auto cloud = testutil::noisy_circle_cloud(300, 0.02, 0xC12C7E);
    const auto f = rips::rips_filtration(rips::distance_matrix(cloud), 2, std::nullopt);
    const auto result = persistence::reduce(f, persistence::FieldSpec{});
    const auto h1 = represent::finitize(result.diagrams[1], f.max_scale);
    std::vector<double> lengths;
    for (const auto& p : h1.pairs) lengths.push_back(p.persistence());
    std::sort(lengths.rbegin(), lengths.rend());
    const double top = lengths.empty() ? 0.0 : lengths[0];
    const double second = lengths.size() > 1 ? lengths[1] : 0.0;
    const double secs = elapsed(start);
    report("circle detection", top > 0.0 && top >= 5.0 * second && secs < 30.0, secs,
           fmt("top %.3f, second %.3f", top, second));
}

void criterion_torus_rank() {
    const auto start = Clock::now();
    const double omegas[] = {1.0, std::numbers::sqrt2};
    const double lambdas[] = {1.0, 1.0};
    // The per-point centering map immerses this torus with self-intersections
    // and erases its classes; translating the cloud to its centroid is the
    // isometric centering that leaves the diagram intact.
    const auto cloud = translate_to_centroid(embedding::gen_quasi_periodic(omegas, lambdas, 2000));
    const double scale = 0.6;
    const auto f = rips::rips_filtration(rips::distance_matrix(cloud), 2, scale);
    const auto result = persistence::reduce(f, persistence::FieldSpec{});
    const auto h1 = represent::finitize(result.diagrams[1], scale);
    const auto rank = represent::torus_rank_check(h1, 3.0);
    const double secs = elapsed(start);
    const bool pass = rank.n == 2 && rank.expected_betti.size() == 3 &&
                      rank.expected_betti[1] == 2 && secs < 300.0;
    report("torus rank", pass, secs, fmt("N = %zu", rank.n));
}

void criterion_periodicity_pipeline() {
    const auto start = Clock::now();
    pipeline::PipelineConfig cfg;
    cfg.tau = 0;
    cfg.m = 0;
    cfg.mi_width_bins = 50;
    cfg.max_scale = 0.5;
    const auto base = testutil::sine_series(10000, 100.0);
    const auto windows = signal::sample_windows(base, 500, 50, 0x5EED);
    std::size_t good = 0;
    for (const auto& w : windows) {
        const auto params = pipeline::resolve_embedding_params(w, cfg);
        const auto sd = pipeline::window_diagrams(w, cfg, params);
        const auto h1 = represent::finitize(sd.diagrams[1], sd.max_scale);
        if (represent::torus_rank_check(h1, 5.0).n == 1) ++good;
    }
    report("periodicity pipeline", good >= 48, elapsed(start),  // 95% of 50
           fmt("one prominent beta1 class on %zu/50 windows", good));
}

void criterion_parameter_heuristics() {
    const auto start = Clock::now();
    bool pass = true;
    std::string detail;

    for (double period : {40.23, 63.137, 80.09}) {
        const auto ts = testutil::sine_series(8192, period);
        const auto bins = signal::BinPartition::equal_width(ts, 32);
        const auto est = signal::estimate_delay(ts, 40, bins);
        const double quarter = period / 4.0;
        if (std::abs(double(est.tau) - quarter) > 1.0) {
            pass = false;
            detail += fmt("tau %zu vs quarter %.2f; ", est.tau, quarter);
        }
    }

    const auto sine = testutil::sine_series(8192, 63.137);
    const auto dim = signal::estimate_dimension(sine, 16, 6);
    const double fraction =
        signal::fnn_fraction(sine, dim.m, 16, signal::fnn_default_epsilon(sine));
    if (fraction >= 0.01) {
        pass = false;
        detail += fmt("fnn %.4f at m=%zu; ", fraction, dim.m);
    }

    const auto noise = testutil::uniform_noise_series(10000, 0x401E5);
    const auto nbins = signal::BinPartition::equal_frequency(noise, 500);
    double worst = 0.0;
    for (std::size_t tau = 1; tau <= 50; ++tau)
        worst = std::max(worst, signal::mutual_information(noise, tau, nbins));
    if (worst >= 0.05) {
        pass = false;
        detail += fmt("noise MI %.4f; ", worst);
    }
    if (detail.empty()) detail = fmt("max noise MI %.4f bits", worst);
    report("parameter heuristics", pass, elapsed(start), detail);
}

void criterion_h0_unionfind() {
    const auto start = Clock::now();
    const persistence::FieldSpec field;
    std::size_t mismatches = 0;
    auto check = [&](const embedding::PointCloud& pc, std::optional<double> scale) {
        const auto dm = rips::distance_matrix(pc);
        const auto fast = persistence::h0_unionfind(dm, scale);
        const auto slow = persistence::reduce(rips::rips_filtration(dm, 1, scale), field);
        if (!testoracle::diagrams_equal(fast, slow.diagrams[0])) ++mismatches;
    };
    check(testutil::unit_square_cloud(), std::nullopt);
    check(testutil::noisy_circle_cloud(300, 0.02, 0xC12C7E), std::nullopt);
    {
        const double omegas[] = {1.0, std::numbers::sqrt2};
        const double lambdas[] = {1.0, 1.0};
        check(translate_to_centroid(embedding::gen_quasi_periodic(omegas, lambdas, 2000)), 0.6);
    }
    for (const auto& pc : g_small_clouds) check(pc, std::nullopt);
    report("h0 union-find vs reduce", mismatches == 0, elapsed(start),
           fmt("%zu clouds, %zu mismatches", g_small_clouds.size() + 3, mismatches));
}

void criterion_entropy_filter() {
    const auto start = Clock::now();
    pipeline::PipelineConfig cfg;  // defaults: window 500, threshold 0.98, dimension-0 entropy
    cfg.tau = 1;
    cfg.m = 5;
    std::mt19937_64 rng(0xF117E2);
    std::size_t noise_dropped = 0, sine_kept = 0;
    for (int s = 0; s < 100; ++s) {
        const auto noise = testutil::uniform_noise_series(500, rng(), "noise");
        if (!pipeline::filter_window(noise, cfg).kept) ++noise_dropped;
        const auto sine = testutil::sine_series(500, 500.0, 1.0,
                                                2.0 * std::numbers::pi * testutil::uniform01(rng));
        if (pipeline::filter_window(sine, cfg).kept) ++sine_kept;
    }
    report("entropy filter", noise_dropped >= 95 && sine_kept >= 95, elapsed(start),
           fmt("noise dropped %zu/100, tones kept %zu/100", noise_dropped, sine_kept));
}

void criterion_representation_arithmetic() {
    const auto start = Clock::now();
    bool pass = true;

    persistence::PersistenceDiagram bars;
    bars.dim = 1;
    bars.pairs = {{0.0, 4.0}, {0.0, 2.0}};
    const represent::CurveGrid grid{0.0, 4.0, 5};
    const auto sil = represent::silhouette(bars, 2.0, grid);
    pass = pass && std::abs(sil.curve.values[3] - 0.8) <= 1e-12;

    persistence::PersistenceDiagram lengths;
    lengths.dim = 0;
    lengths.pairs = {{0.0, 1.0}, {1.0, 2.0}, {2.0, 4.0}};
    pass = pass && std::abs(represent::persistence_entropy(lengths, false) - 1.5) <= 1e-12;

    std::mt19937_64 rng(0x8E771);
    for (int trial = 0; trial < 100; ++trial) {
        persistence::PersistenceDiagram d;
        d.dim = 1;
        const std::size_t bar_count = testutil::uniform_below(rng, 25);
        for (std::size_t i = 0; i < bar_count; ++i) {
            const double b = 5.0 * testutil::uniform01(rng);
            d.pairs.push_back({b, b + 0.01 + 2.0 * testutil::uniform01(rng)});
        }
        if (trial % 4 == 0)
            d.pairs.push_back({testutil::uniform01(rng), persistence::kInfiniteDeath});
        const represent::CurveGrid g{0.0, 7.0, 53};
        const auto curve = represent::betti_curve(d, g);
        for (std::size_t i = 0; i < g.resolution; ++i) {
            const double s = g.abscissa(i);
            double expected = 0;
            for (const auto& p : d.pairs)
                if (p.birth <= s && s <= p.death) ++expected;
            if (curve.values[i] != expected) pass = false;
        }
    }
    report("representation arithmetic", pass, elapsed(start));
}

void criterion_determinism() {
    const auto start = Clock::now();
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "tsph_accept_determinism";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::mt19937_64 rng(0xDE7E12);
    for (int i = 0; i < 3; ++i) {
        std::ofstream out(dir / ("s" + std::to_string(i) + ".csv"));
        const auto ts = testutil::sine_series(160, 18.0 + 7.0 * i, 1.0, testutil::uniform01(rng));
        for (double v : ts.values) out << v << "\n";
    }
    pipeline::PipelineConfig cfg;
    cfg.window_len = 128;
    cfg.tau = 1;
    cfg.m = 4;
    cfg.windows_per_series = 2;
    cfg.seed = 99;
    const auto inputs = pipeline::collect_inputs(dir);
    const auto first = serialize::dump_stable(
        serialize::feature_dataset_to_json(pipeline::run_features(inputs, {}, cfg)));
    const auto second = serialize::dump_stable(
        serialize::feature_dataset_to_json(pipeline::run_features(inputs, {}, cfg)));
    report("determinism", !first.empty() && first == second, elapsed(start),
           fmt("%zu bytes per export", first.size()));
}

void criterion_classifier() {
    const auto start = Clock::now();
    pipeline::PipelineConfig cfg;
    cfg.window_len = 120;
    cfg.tau = 1;
    cfg.m = 5;
    cfg.max_scale = 2.2;
    const double periods[4] = {10.0, 16.0, 26.0, 42.0};
    const double amps[4] = {1.2, 1.0, 0.85, 0.75};
    std::mt19937_64 rng(0xC0A75);
    pipeline::FeatureDataset train, test;
    train.config = cfg;
    test.config = cfg;
    for (int c = 0; c < 4; ++c) {
        for (int w = 0; w < 100; ++w) {
            signal::TimeSeries ts;
            ts.id = "c" + std::to_string(c) + "w" + std::to_string(w);
            const double phase = 2.0 * std::numbers::pi * testutil::uniform01(rng);
            const double baseline = 2.5 * (2.0 * testutil::uniform01(rng) - 1.0);
            for (std::size_t i = 0; i < cfg.window_len; ++i)
                ts.values.push_back(
                    baseline +
                    amps[c] * std::sin(2.0 * std::numbers::pi * double(i) / periods[c] + phase) +
                    0.03 * testutil::gaussian(rng));
            ts.missing.assign(cfg.window_len, false);
            auto fv = pipeline::window_features(ts, cfg, {cfg.tau, cfg.m});
            fv.label = "class" + std::to_string(c);
            (w % 2 == 0 ? train : test).features.push_back(std::move(fv));
        }
    }
    const auto full = pipeline::classify_baseline(train, test);
    const auto raw = pipeline::classify_raw_only(train, test);
    const bool pass = full.accuracy >= 0.9 && full.accuracy > raw.accuracy;
    report("baseline classifier", pass, elapsed(start),
           fmt("concat %.3f vs raw %.3f", full.accuracy, raw.accuracy));
}

}  // namespace

int main() {
    std::printf("acceptance suite\n");
    criterion_oracle_equivalence();
    criterion_unit_square();
    criterion_circle();
    criterion_torus_rank();
    criterion_periodicity_pipeline();
    criterion_parameter_heuristics();
    criterion_h0_unionfind();
    criterion_entropy_filter();
    criterion_representation_arithmetic();
    criterion_determinism();
    criterion_classifier();
    std::printf("%d criterion(s) failed\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
