#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace tsph::signal {

/// A finite, strictly ordered sequence of sensor readings. Entries whose
/// `missing` flag is set carry no usable value until imputation.
struct TimeSeries {
    std::string id;
    std::vector<double> values;
    std::vector<bool> missing;  // same length as values; true = value absent

    std::size_t size() const { return values.size(); }
    bool has_missing() const;
};

struct CsvFormat {
    char delimiter = ',';
};

/// Reads a delimited text table with one numeric value per row. An optional
/// leading timestamp column is ignored; row order defines the sequence.
/// Missing-value sentinels: empty cell, "nan", "null" (case-insensitive).
/// Non-finite parsed values are treated as missing as well.
TimeSeries load_series(std::istream& in, const CsvFormat& fmt = {}, std::string id = "series");
TimeSeries load_series_file(const std::filesystem::path& path, const CsvFormat& fmt = {});

/// Replaces every missing entry by the median of the non-missing values.
/// Idempotent. Throws if every value is missing.
TimeSeries impute_median(const TimeSeries& ts);

/// Population standard deviation (root-mean-square deviation from the mean).
double stddev(const TimeSeries& ts);

struct TurningPoints {
    std::size_t count = 0;
    std::vector<std::size_t> indices;
};

/// Indices i with (t_i - t_{i-1})(t_{i+1} - t_i) < 0. Plateaus do not count.
/// Series shorter than 3 yield zero turning points.
TurningPoints turning_points(const TimeSeries& ts);

/// Equal-frequency partition of the value range: n/s bins, each holding s of
/// the sorted values. Edges run from the global minimum to the global maximum.
struct BinPartition {
    std::size_t bin_size = 0;    // s
    std::size_t bin_count = 0;   // n/s
    std::vector<double> edges;   // bin_count + 1 boundaries, ascending

    /// Builds the partition for a divisor s of the series length.
    static BinPartition equal_frequency(const TimeSeries& ts, std::size_t s);

    /// Uniform-width partition of [min, max] into `bin_count` bins. Useful as
    /// the "fine value bins" of delay estimation on clean tones, where the
    /// rank-based partition distorts the profile shape.
    static BinPartition equal_width(const TimeSeries& ts, std::size_t bin_count);

    /// Bin index for a value: number of interior edges strictly below v,
    /// clamped to [0, bin_count).
    std::size_t bin_of(double v) const;
};

/// Selects the bin size: the smallest divisor s of n in [2, n/2] whose mean
/// turning-point count per bin reaches one (each bin then spans roughly a
/// half-period). If no divisor reaches it, returns the divisor minimizing
/// that mean, ties toward smaller s. Throws when n has no divisor in
/// [2, n/2]; the caller should truncate the series to a composite length.
BinPartition choose_bin_size(const TimeSeries& ts);

/// Mutual information in bits between the bin of t_i and the bin of t_{i+tau},
/// estimated by counting the n-tau pairs into `bins`. Nonnegative; cells with
/// zero joint probability contribute zero.
double mutual_information(const TimeSeries& ts, std::size_t tau, const BinPartition& bins);

struct DelayEstimate {
    std::size_t tau = 1;
    std::vector<std::pair<std::size_t, double>> mi_profile;  // (tau, bits)
};

/// Scans tau = 1..tau_max and returns the first local minimum of the mutual
/// information, detected with a prominence requirement: the profile must rise
/// from its running minimum by a quarter of the profile range before the
/// minimum counts (strict sample-level dips are binning artifacts). When the
/// profile has no such minimum, the global argmin with ties broken toward
/// smaller tau. Requires tau_max < n/2.
DelayEstimate estimate_delay(const TimeSeries& ts, std::size_t tau_max, const BinPartition& bins);
DelayEstimate estimate_delay(const TimeSeries& ts, std::size_t tau_max);  // bins via choose_bin_size

/// False-nearest-neighbor fraction for the m-coordinate delay embedding
/// (coordinates t_i, t_{i+tau}, ..., t_{i+(m-1)tau}). For each point the
/// exact Euclidean nearest neighbor k is located, and the pair is false when
/// |t_{i+m tau} - t_{k+m tau}| / sigma > epsilon with sigma the series'
/// standard deviation. A constant series has no false neighbors.
double fnn_fraction(const TimeSeries& ts, std::size_t m, std::size_t tau, double epsilon);

/// The default threshold: twice the series' standard deviation.
double fnn_default_epsilon(const TimeSeries& ts);

struct DimensionEstimate {
    std::size_t m = 1;
    std::vector<std::pair<std::size_t, double>> fnn_profile;  // (m, fraction)
};

/// Smallest m in 1..m_max whose false-neighbor fraction lies within
/// `tolerance` of the profile minimum. Uses epsilon = 2 sigma.
DimensionEstimate estimate_dimension(const TimeSeries& ts, std::size_t tau, std::size_t m_max,
                                     double tolerance = 0.01);

/// Draws `count` contiguous windows of length `window_len`, start indices
/// sampled without replacement, deterministic under `seed`. Throws when more
/// windows are requested than start positions exist.
std::vector<TimeSeries> sample_windows(const TimeSeries& ts, std::size_t window_len,
                                       std::size_t count, std::uint64_t seed);

}  // namespace tsph::signal
