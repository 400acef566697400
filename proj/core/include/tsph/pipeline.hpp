#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tsph/embedding.hpp"
#include "tsph/persistence.hpp"
#include "tsph/represent.hpp"
#include "tsph/signal.hpp"

namespace tsph::pipeline {

enum class EntropyDims { combined, h0, h1 };

struct PipelineConfig {
    std::size_t window_len = 500;
    std::size_t tau = 0;                   // 0 = estimate per series
    std::size_t m = 5;                     // 0 = estimate per series; corpus default 5
    int max_dim = 2;
    std::optional<double> max_scale;       // empty = enclosing radius
    std::uint64_t field_prime = persistence::kDefaultPrime;
    double silhouette_power = 1.0;
    double entropy_threshold = 0.98;
    std::size_t curve_resolution = 0;      // 0 = window_len
    std::uint64_t seed = 0;
    std::size_t windows_per_series = 1;
    std::size_t tau_max = 0;               // 0 = min(n/2 - 1, 128)
    std::size_t m_max = 8;
    std::size_t mi_width_bins = 0;         // 0 = turning-point partition; else equal-width bins
    EntropyDims entropy_dims = EntropyDims::h0;
    char delimiter = ',';
    std::size_t workers = 1;

    std::size_t effective_resolution() const {
        return curve_resolution == 0 ? window_len : curve_resolution;
    }
    void validate() const;  // throws std::invalid_argument
};

struct SeriesParams {
    std::string id;
    std::size_t length = 0;
    std::size_t bin_size = 0;
    std::size_t bin_count = 0;
    std::size_t turning_points = 0;
    double sigma = 0.0;
    signal::DelayEstimate delay;
    signal::DimensionEstimate dimension;
    bool degenerate_mi = false;  // flat (all-equal) mutual-information profile
};

struct FailureRecord {
    std::string id;
    std::string error;
};

struct ParamsReport {
    std::vector<SeriesParams> series;
    std::vector<FailureRecord> failures;
};

struct FilterDecision {
    std::string id;
    double entropy = 0.0;
    bool kept = false;
};

struct FilterReport {
    std::vector<FilterDecision> decisions;
    std::vector<FailureRecord> failures;
};

struct FeatureVector {
    std::string id;
    std::string label;
    std::size_t window_start = 0;
    std::size_t tau = 1;
    std::size_t m = 1;
    double max_scale = 0.0;       // grid upper bound actually used
    std::vector<double> raw;      // all three channels share one length
    std::vector<double> beta0;
    std::vector<double> beta1;
};

struct FeatureDataset {
    PipelineConfig config;
    std::vector<FeatureVector> features;
    std::vector<FailureRecord> failures;
};

struct SeriesDiagrams {
    std::string id;
    double max_scale = 0.0;
    std::vector<persistence::PersistenceDiagram> diagrams;
};

struct ClassMetrics {
    std::string label;
    std::size_t support = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct ClassifyReport {
    std::size_t train_size = 0;
    std::size_t test_size = 0;
    double accuracy = 0.0;
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double macro_f1 = 0.0;
    std::vector<ClassMetrics> per_class;
    bool single_class = false;  // degenerate: only one label present
};

/// Resolved embedding parameters for one imputed series: config overrides
/// when set, otherwise the delay / dimension estimators.
struct EmbeddingParams {
    std::size_t tau = 1;
    std::size_t m = 1;
};
EmbeddingParams resolve_embedding_params(const signal::TimeSeries& imputed,
                                         const PipelineConfig& cfg);

/// Persistence diagrams of one window under the config: impute, embed,
/// center, Rips, reduction over Z/p. Returns diagrams for dimensions
/// 0..max_dim-1 and the scale that bounded the filtration.
SeriesDiagrams window_diagrams(const signal::TimeSeries& window, const PipelineConfig& cfg,
                               const EmbeddingParams& params);

/// Normalized persistence entropy used by the filter stage, computed on the
/// configured combination of diagram dimensions after substituting infinite
/// deaths with the filtration scale.
double filter_entropy(const SeriesDiagrams& sd, EntropyDims dims);

/// Filter decision for one window: entropy under the configured dimensions,
/// kept when it stays below the threshold. At the default (dimension 0 only)
/// the diagram comes from the union-find fast path.
FilterDecision filter_window(const signal::TimeSeries& window, const PipelineConfig& cfg);

/// Feature channels of one window: the raw sample plus the Betti curves of
/// H0 and H1, all resampled to the configured resolution.
FeatureVector window_features(const signal::TimeSeries& window, const PipelineConfig& cfg,
                              const EmbeddingParams& params);

ParamsReport run_params(const std::vector<std::filesystem::path>& inputs,
                        const PipelineConfig& cfg);
FilterReport run_filter(const std::vector<std::filesystem::path>& inputs,
                        const PipelineConfig& cfg);
FeatureDataset run_features(const std::vector<std::filesystem::path>& inputs,
                            const std::map<std::string, std::string>& labels,
                            const PipelineConfig& cfg);

/// 1-nearest-neighbor with Euclidean distance on the concatenated
/// (raw, beta0, beta1) channels; macro-averaged metrics.
ClassifyReport classify_baseline(const FeatureDataset& train, const FeatureDataset& test);

/// Same classifier restricted to the raw channel only.
ClassifyReport classify_raw_only(const FeatureDataset& train, const FeatureDataset& test);

/// Reads a two-column delimited file mapping series id to class label.
std::map<std::string, std::string> load_labels(const std::filesystem::path& path,
                                               char delimiter = ',');

/// Expands a file-or-directory input into a sorted list of series files.
std::vector<std::filesystem::path> collect_inputs(const std::filesystem::path& input);

}  // namespace tsph::pipeline
