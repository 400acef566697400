#include "tsph/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "tsph/rips.hpp"

namespace tsph::pipeline {

namespace {

// Runs job(i) for i in [0, count) across cfg.workers threads. Results are
// written into per-index slots, so the output order never depends on thread
// scheduling.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& job) {
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            job(i);
        }
    };
    std::vector<std::thread> pool;
    const std::size_t spawn = std::min(workers, count);
    pool.reserve(spawn);
    for (std::size_t w = 0; w < spawn; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

std::size_t auto_tau_max(std::size_t n) {
    if (n < 4) throw std::invalid_argument("series too short for delay estimation");
    return std::min<std::size_t>(n / 2 - 1, 128);
}

signal::TimeSeries prefix_window(const signal::TimeSeries& ts, std::size_t window_len) {
    if (ts.size() <= window_len) return ts;
    signal::TimeSeries w;
    w.id = ts.id;
    w.values.assign(ts.values.begin(), ts.values.begin() + window_len);
    w.missing.assign(ts.missing.begin(), ts.missing.begin() + window_len);
    return w;
}

std::vector<double> resample_linear(const std::vector<double>& v, std::size_t resolution) {
    if (v.size() == resolution) return v;
    std::vector<double> out(resolution);
    if (v.size() == 1) {
        std::fill(out.begin(), out.end(), v.front());
        return out;
    }
    for (std::size_t i = 0; i < resolution; ++i) {
        const double x = double(i) * double(v.size() - 1) / double(resolution - 1);
        const std::size_t lo = std::min(std::size_t(x), v.size() - 2);
        const double frac = x - double(lo);
        out[i] = v[lo] * (1.0 - frac) + v[lo + 1] * frac;
    }
    return out;
}

}  // namespace

void PipelineConfig::validate() const {
    if (window_len < 2) throw std::invalid_argument("config: window_len must be >= 2");
    if (max_dim < 1) throw std::invalid_argument("config: max_dim must be >= 1");
    if (max_scale && *max_scale <= 0.0)
        throw std::invalid_argument("config: max_scale must be positive");
    if (!(entropy_threshold > 0.0) || entropy_threshold > 1.0)
        throw std::invalid_argument("config: entropy_threshold must lie in (0, 1]");
    if (!(silhouette_power > 0.0))
        throw std::invalid_argument("config: silhouette_power must be positive");
    if (m_max < 1) throw std::invalid_argument("config: m_max must be >= 1");
    if (windows_per_series < 1)
        throw std::invalid_argument("config: windows_per_series must be >= 1");
    if (workers < 1) throw std::invalid_argument("config: workers must be >= 1");
    persistence::FieldSpec check(field_prime);  // validates the prime
    (void)check;
}

EmbeddingParams resolve_embedding_params(const signal::TimeSeries& imputed,
                                         const PipelineConfig& cfg) {
    EmbeddingParams params;
    if (cfg.tau != 0) {
        params.tau = cfg.tau;
    } else {
        const std::size_t tau_max = cfg.tau_max != 0 ? cfg.tau_max : auto_tau_max(imputed.size());
        const auto bins = cfg.mi_width_bins != 0
                              ? signal::BinPartition::equal_width(imputed, cfg.mi_width_bins)
                              : signal::choose_bin_size(imputed);
        params.tau = signal::estimate_delay(imputed, tau_max, bins).tau;
    }
    if (cfg.m != 0) {
        params.m = cfg.m;
    } else {
        std::size_t m_max = cfg.m_max;
        while (m_max > 1 && imputed.size() <= m_max * params.tau + 1) --m_max;
        params.m = signal::estimate_dimension(imputed, params.tau, m_max).m;
    }
    return params;
}

SeriesDiagrams window_diagrams(const signal::TimeSeries& window, const PipelineConfig& cfg,
                               const EmbeddingParams& params) {
    const auto imputed = window.has_missing() ? signal::impute_median(window) : window;
    const auto cloud = embedding::center(embedding::sliding_window(imputed, params.m, params.tau));
    const auto dm = rips::distance_matrix(cloud);
    const auto filtration = rips::rips_filtration(dm, cfg.max_dim, cfg.max_scale);
    auto reduced = persistence::reduce(filtration, persistence::FieldSpec(cfg.field_prime));

    SeriesDiagrams sd;
    sd.id = window.id;
    sd.max_scale = filtration.max_scale;
    sd.diagrams = std::move(reduced.diagrams);
    return sd;
}

namespace {

// The filter at its default (dimension-0 entropy) needs no simplices beyond
// edges, so it can take the union-find path instead of a full reduction.
SeriesDiagrams filter_diagrams(const signal::TimeSeries& window, const PipelineConfig& cfg,
                               const EmbeddingParams& params) {
    if (cfg.entropy_dims != EntropyDims::h0) return window_diagrams(window, cfg, params);
    const auto imputed = window.has_missing() ? signal::impute_median(window) : window;
    const auto cloud = embedding::center(embedding::sliding_window(imputed, params.m, params.tau));
    const auto dm = rips::distance_matrix(cloud);
    const double scale = cfg.max_scale ? *cfg.max_scale : dm.enclosing_radius();
    SeriesDiagrams sd;
    sd.id = window.id;
    sd.max_scale = scale;
    sd.diagrams.push_back(persistence::h0_unionfind(dm, scale));
    return sd;
}

}  // namespace

FilterDecision filter_window(const signal::TimeSeries& window, const PipelineConfig& cfg) {
    const auto params = resolve_embedding_params(window, cfg);
    const auto sd = filter_diagrams(window, cfg, params);
    const double entropy = filter_entropy(sd, cfg.entropy_dims);
    return {window.id, entropy, entropy < cfg.entropy_threshold};
}

double filter_entropy(const SeriesDiagrams& sd, EntropyDims dims) {
    persistence::PersistenceDiagram combined;
    combined.dim = -1;
    auto append = [&](const persistence::PersistenceDiagram& d) {
        const auto finite = represent::finitize(d, sd.max_scale);
        combined.pairs.insert(combined.pairs.end(), finite.pairs.begin(), finite.pairs.end());
    };
    if (dims == EntropyDims::combined || dims == EntropyDims::h0) append(sd.diagrams.at(0));
    if ((dims == EntropyDims::combined || dims == EntropyDims::h1) && sd.diagrams.size() > 1)
        append(sd.diagrams.at(1));
    // Fewer than two bars means no persistence structure at all (constants,
    // single points); such series count as maximally entropic so the filter
    // removes them.
    if (combined.pairs.size() < 2) return 1.0;
    return represent::persistence_entropy(combined, true);
}

FeatureVector window_features(const signal::TimeSeries& window, const PipelineConfig& cfg,
                              const EmbeddingParams& params) {
    const auto imputed = window.has_missing() ? signal::impute_median(window) : window;
    auto sd = window_diagrams(imputed, cfg, params);
    if (!(sd.max_scale > 0.0))
        throw std::runtime_error(window.id + ": degenerate window (all embedded points coincide)");

    const std::size_t resolution = cfg.effective_resolution();
    const represent::CurveGrid grid{0.0, sd.max_scale, resolution};
    auto beta0 = represent::betti_curve(sd.diagrams.at(0), grid);
    auto beta1 = sd.diagrams.size() > 1
                     ? represent::betti_curve(sd.diagrams.at(1), grid)
                     : represent::SampledCurve{grid, std::vector<double>(resolution, 0.0)};
    beta0 = represent::impute_curve_median(beta0);
    beta1 = represent::impute_curve_median(beta1);

    FeatureVector fv;
    fv.id = window.id;
    fv.window_start = 0;
    fv.tau = params.tau;
    fv.m = params.m;
    fv.max_scale = sd.max_scale;
    fv.raw = resample_linear(imputed.values, resolution);
    fv.beta0 = std::move(beta0.values);
    fv.beta1 = std::move(beta1.values);
    return fv;
}

std::vector<std::filesystem::path> collect_inputs(const std::filesystem::path& input) {
    namespace fs = std::filesystem;
    if (fs::is_directory(input)) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(input)) {
            if (!entry.is_regular_file()) continue;
            const auto ext = entry.path().extension().string();
            if (ext == ".csv" || ext == ".txt" || ext == ".tsv") files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        if (files.empty()) throw std::runtime_error("no .csv/.txt/.tsv files in " + input.string());
        return files;
    }
    if (!fs::exists(input)) throw std::runtime_error("input not found: " + input.string());
    return {input};
}

ParamsReport run_params(const std::vector<std::filesystem::path>& inputs,
                        const PipelineConfig& cfg) {
    cfg.validate();
    ParamsReport report;
    std::vector<std::optional<SeriesParams>> slots(inputs.size());
    std::vector<std::optional<FailureRecord>> errors(inputs.size());

    parallel_for(inputs.size(), cfg.workers, [&](std::size_t i) {
        const auto& path = inputs[i];
        std::string id = path.stem().string();
        try {
            auto ts = signal::impute_median(
                signal::load_series_file(path, signal::CsvFormat{cfg.delimiter}));
            SeriesParams sp;
            sp.id = ts.id;
            sp.length = ts.size();
            sp.sigma = signal::stddev(ts);
            sp.turning_points = signal::turning_points(ts).count;
            const auto bins = signal::choose_bin_size(ts);
            sp.bin_size = bins.bin_size;
            sp.bin_count = bins.bin_count;
            const std::size_t tau_max = cfg.tau_max != 0 ? cfg.tau_max : auto_tau_max(ts.size());
            const auto mi_bins = cfg.mi_width_bins != 0
                                     ? signal::BinPartition::equal_width(ts, cfg.mi_width_bins)
                                     : bins;
            sp.delay = signal::estimate_delay(ts, tau_max, mi_bins);
            double lo = sp.delay.mi_profile.front().second, hi = lo;
            for (const auto& [tau, bits] : sp.delay.mi_profile) {
                lo = std::min(lo, bits);
                hi = std::max(hi, bits);
            }
            sp.degenerate_mi = hi - lo < 1e-12;
            std::size_t m_max = cfg.m_max;
            while (m_max > 1 && ts.size() <= m_max * sp.delay.tau + 1) --m_max;
            sp.dimension = signal::estimate_dimension(ts, sp.delay.tau, m_max);
            slots[i] = std::move(sp);
        } catch (const std::exception& e) {
            errors[i] = FailureRecord{id, e.what()};
        }
    });
    for (auto& s : slots)
        if (s) report.series.push_back(std::move(*s));
    for (auto& e : errors)
        if (e) report.failures.push_back(std::move(*e));
    return report;
}

FilterReport run_filter(const std::vector<std::filesystem::path>& inputs,
                        const PipelineConfig& cfg) {
    cfg.validate();
    FilterReport report;
    std::vector<std::optional<FilterDecision>> slots(inputs.size());
    std::vector<std::optional<FailureRecord>> errors(inputs.size());

    parallel_for(inputs.size(), cfg.workers, [&](std::size_t i) {
        const auto& path = inputs[i];
        std::string id = path.stem().string();
        try {
            auto ts = signal::impute_median(
                signal::load_series_file(path, signal::CsvFormat{cfg.delimiter}));
            const auto window = prefix_window(ts, cfg.window_len);
            slots[i] = filter_window(window, cfg);
        } catch (const std::exception& e) {
            errors[i] = FailureRecord{id, e.what()};
        }
    });
    for (auto& s : slots)
        if (s) report.decisions.push_back(std::move(*s));
    for (auto& e : errors)
        if (e) report.failures.push_back(std::move(*e));
    return report;
}

FeatureDataset run_features(const std::vector<std::filesystem::path>& inputs,
                            const std::map<std::string, std::string>& labels,
                            const PipelineConfig& cfg) {
    cfg.validate();
    FeatureDataset ds;
    ds.config = cfg;
    std::vector<std::vector<FeatureVector>> slots(inputs.size());
    std::vector<std::optional<FailureRecord>> errors(inputs.size());

    parallel_for(inputs.size(), cfg.workers, [&](std::size_t i) {
        const auto& path = inputs[i];
        std::string id = path.stem().string();
        try {
            auto ts = signal::impute_median(
                signal::load_series_file(path, signal::CsvFormat{cfg.delimiter}));
            const auto params = resolve_embedding_params(ts, cfg);
            const auto windows =
                signal::sample_windows(ts, std::min(cfg.window_len, ts.size()),
                                       cfg.windows_per_series, cfg.seed);
            std::string label;
            if (auto it = labels.find(ts.id); it != labels.end()) label = it->second;
            for (const auto& window : windows) {
                auto fv = window_features(window, cfg, params);
                fv.id = ts.id;
                fv.label = label;
                const auto colon = window.id.rfind(':');
                fv.window_start = std::stoul(window.id.substr(colon + 1));
                slots[i].push_back(std::move(fv));
            }
        } catch (const std::exception& e) {
            errors[i] = FailureRecord{id, e.what()};
        }
    });
    for (auto& s : slots)
        for (auto& fv : s) ds.features.push_back(std::move(fv));
    for (auto& e : errors)
        if (e) ds.failures.push_back(std::move(*e));
    return ds;
}

namespace {

ClassifyReport classify_impl(const FeatureDataset& train, const FeatureDataset& test,
                             bool raw_only) {
    if (train.features.empty() || test.features.empty())
        throw std::invalid_argument("classify: train and test sets must be nonempty");

    auto channel_view = [&](const FeatureVector& fv) {
        std::vector<const std::vector<double>*> channels{&fv.raw};
        if (!raw_only) {
            channels.push_back(&fv.beta0);
            channels.push_back(&fv.beta1);
        }
        return channels;
    };
    const auto ref = channel_view(train.features.front());
    auto check_lengths = [&](const FeatureVector& fv) {
        const auto ch = channel_view(fv);
        for (std::size_t c = 0; c < ch.size(); ++c)
            if (ch[c]->size() != ref[c]->size())
                throw std::invalid_argument("classify: channel length mismatch at id " + fv.id);
    };
    for (const auto& fv : train.features) check_lengths(fv);
    for (const auto& fv : test.features) check_lengths(fv);

    auto distance2 = [&](const FeatureVector& a, const FeatureVector& b) {
        const auto ca = channel_view(a);
        const auto cb = channel_view(b);
        double acc = 0.0;
        for (std::size_t c = 0; c < ca.size(); ++c) {
            const auto& va = *ca[c];
            const auto& vb = *cb[c];
            for (std::size_t k = 0; k < va.size(); ++k) {
                const double diff = va[k] - vb[k];
                acc += diff * diff;
            }
        }
        return acc;
    };

    std::vector<std::string> labels;  // sorted distinct labels
    for (const auto& fv : train.features) labels.push_back(fv.label);
    for (const auto& fv : test.features) labels.push_back(fv.label);
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    auto label_index = [&](const std::string& l) {
        return std::size_t(std::lower_bound(labels.begin(), labels.end(), l) - labels.begin());
    };

    std::vector<std::size_t> tp(labels.size(), 0), fp(labels.size(), 0), fn(labels.size(), 0);
    std::size_t correct = 0;
    for (const auto& probe : test.features) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_i = 0;
        for (std::size_t i = 0; i < train.features.size(); ++i) {
            const double d = distance2(probe, train.features[i]);
            if (d < best) {
                best = d;
                best_i = i;
            }
        }
        const auto predicted = label_index(train.features[best_i].label);
        const auto actual = label_index(probe.label);
        if (predicted == actual) {
            ++correct;
            ++tp[actual];
        } else {
            ++fp[predicted];
            ++fn[actual];
        }
    }

    ClassifyReport report;
    report.train_size = train.features.size();
    report.test_size = test.features.size();
    report.accuracy = double(correct) / double(test.features.size());
    report.single_class = labels.size() == 1;
    double psum = 0.0, rsum = 0.0, fsum = 0.0;
    for (std::size_t c = 0; c < labels.size(); ++c) {
        ClassMetrics cm;
        cm.label = labels[c];
        cm.support = tp[c] + fn[c];
        cm.precision = tp[c] + fp[c] > 0 ? double(tp[c]) / double(tp[c] + fp[c]) : 0.0;
        cm.recall = tp[c] + fn[c] > 0 ? double(tp[c]) / double(tp[c] + fn[c]) : 0.0;
        cm.f1 = cm.precision + cm.recall > 0.0
                    ? 2.0 * cm.precision * cm.recall / (cm.precision + cm.recall)
                    : 0.0;
        psum += cm.precision;
        rsum += cm.recall;
        fsum += cm.f1;
        report.per_class.push_back(std::move(cm));
    }
    report.macro_precision = psum / double(labels.size());
    report.macro_recall = rsum / double(labels.size());
    report.macro_f1 = fsum / double(labels.size());
    return report;
}

}  // namespace

ClassifyReport classify_baseline(const FeatureDataset& train, const FeatureDataset& test) {
    return classify_impl(train, test, false);
}

ClassifyReport classify_raw_only(const FeatureDataset& train, const FeatureDataset& test) {
    return classify_impl(train, test, true);
}

std::map<std::string, std::string> load_labels(const std::filesystem::path& path, char delimiter) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open labels file " + path.string());
    std::map<std::string, std::string> labels;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto pos = line.find(delimiter);
        if (pos == std::string::npos)
            throw std::runtime_error("labels file: expected two delimited columns: " + line);
        labels[line.substr(0, pos)] = line.substr(pos + 1);
    }
    return labels;
}

}  // namespace tsph::pipeline
