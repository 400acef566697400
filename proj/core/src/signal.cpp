#include "tsph/signal.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <random>
#include <stdexcept>

namespace tsph::signal {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool is_missing_sentinel(const std::string& cell) {
    if (cell.empty()) return true;
    std::string lower(cell.size(), '\0');
    std::transform(cell.begin(), cell.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return lower == "nan" || lower == "null";
}

bool parse_double(const std::string& cell, double& out) {
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

std::vector<std::string> split(const std::string& line, char delim) {
    std::vector<std::string> cells;
    std::size_t pos = 0;
    while (true) {
        auto next = line.find(delim, pos);
        if (next == std::string::npos) {
            cells.push_back(trim(line.substr(pos)));
            break;
        }
        cells.push_back(trim(line.substr(pos, next - pos)));
        pos = next + 1;
    }
    return cells;
}

void require_imputed(const TimeSeries& ts, const char* op) {
    if (ts.has_missing())
        throw std::invalid_argument(std::string(op) + ": series has missing values; impute first");
}

double series_median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/// Uniform draw in [0, bound) by rejection; avoids the implementation-defined
/// std::uniform_int_distribution so seeds reproduce across platforms.
std::uint64_t bounded_rand(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

}  // namespace

bool TimeSeries::has_missing() const {
    return std::find(missing.begin(), missing.end(), true) != missing.end();
}

TimeSeries load_series(std::istream& in, const CsvFormat& fmt, std::string id) {
    TimeSeries ts;
    ts.id = std::move(id);
    std::string line;
    std::size_t lineno = 0;
    bool first_data_row = true;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto cells = split(line, fmt.delimiter);
        if (cells.size() > 2)
            throw std::runtime_error(ts.id + ": line " + std::to_string(lineno) +
                                     ": expected one value column (optional leading timestamp)");
        const std::string& cell = cells.back();
        double v = 0.0;
        if (is_missing_sentinel(cell)) {
            ts.values.push_back(0.0);
            ts.missing.push_back(true);
        } else if (parse_double(cell, v)) {
            ts.values.push_back(v);
            ts.missing.push_back(!std::isfinite(v));
        } else if (first_data_row) {
            // header row
        } else {
            throw std::runtime_error(ts.id + ": line " + std::to_string(lineno) +
                                     ": unparseable value \"" + cell + "\"");
        }
        first_data_row = false;
    }
    if (ts.values.empty()) throw std::runtime_error(ts.id + ": empty input");
    return ts;
}

TimeSeries load_series_file(const std::filesystem::path& path, const CsvFormat& fmt) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return load_series(in, fmt, path.stem().string());
}

TimeSeries impute_median(const TimeSeries& ts) {
    std::vector<double> present;
    present.reserve(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i)
        if (!ts.missing[i]) present.push_back(ts.values[i]);
    if (present.empty()) throw std::runtime_error(ts.id + ": all values missing");
    const double med = series_median(std::move(present));
    TimeSeries out = ts;
    for (std::size_t i = 0; i < out.size(); ++i)
        if (out.missing[i]) out.values[i] = med;
    std::fill(out.missing.begin(), out.missing.end(), false);
    return out;
}

double stddev(const TimeSeries& ts) {
    require_imputed(ts, "stddev");
    const std::size_t n = ts.size();
    if (n == 0) throw std::invalid_argument("stddev: empty series");
    const double mean = std::accumulate(ts.values.begin(), ts.values.end(), 0.0) / double(n);
    double acc = 0.0;
    for (double v : ts.values) acc += (v - mean) * (v - mean);
    return std::sqrt(acc / double(n));
}

TurningPoints turning_points(const TimeSeries& ts) {
    require_imputed(ts, "turning_points");
    TurningPoints tp;
    const auto& v = ts.values;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        if ((v[i] - v[i - 1]) * (v[i + 1] - v[i]) < 0.0) tp.indices.push_back(i);
    }
    tp.count = tp.indices.size();
    return tp;
}

BinPartition BinPartition::equal_frequency(const TimeSeries& ts, std::size_t s) {
    require_imputed(ts, "equal_frequency");
    const std::size_t n = ts.size();
    if (s == 0 || n == 0 || n % s != 0)
        throw std::invalid_argument("equal_frequency: bin size must divide the series length");
    std::vector<double> sorted = ts.values;
    std::sort(sorted.begin(), sorted.end());
    BinPartition bp;
    bp.bin_size = s;
    bp.bin_count = n / s;
    bp.edges.reserve(bp.bin_count + 1);
    bp.edges.push_back(sorted.front());
    for (std::size_t k = 1; k < bp.bin_count; ++k)
        bp.edges.push_back(0.5 * (sorted[k * s - 1] + sorted[k * s]));
    bp.edges.push_back(sorted.back());
    return bp;
}

BinPartition BinPartition::equal_width(const TimeSeries& ts, std::size_t bin_count) {
    require_imputed(ts, "equal_width");
    if (bin_count == 0 || ts.size() == 0)
        throw std::invalid_argument("equal_width: need a nonempty series and bin_count >= 1");
    const auto [lo_it, hi_it] = std::minmax_element(ts.values.begin(), ts.values.end());
    BinPartition bp;
    bp.bin_size = (ts.size() + bin_count - 1) / bin_count;  // nominal occupancy
    bp.bin_count = bin_count;
    bp.edges.reserve(bin_count + 1);
    for (std::size_t k = 0; k <= bin_count; ++k)
        bp.edges.push_back(*lo_it + (*hi_it - *lo_it) * double(k) / double(bin_count));
    return bp;
}

std::size_t BinPartition::bin_of(double v) const {
    // interior edges are edges[1..bin_count-1]; bin = count of them below v
    const auto first = edges.begin() + 1;
    const auto last = edges.end() - 1;
    return static_cast<std::size_t>(std::lower_bound(first, last, v) - first);
}

BinPartition choose_bin_size(const TimeSeries& ts) {
    require_imputed(ts, "choose_bin_size");
    const std::size_t n = ts.size();
    std::vector<std::size_t> divisors;
    for (std::size_t s = 2; s <= n / 2; ++s)
        if (n % s == 0) divisors.push_back(s);
    if (divisors.empty())
        throw std::runtime_error(ts.id + ": length " + std::to_string(n) +
                                 " has no divisor in [2, n/2]; truncate the series to a "
                                 "composite length");
    const std::size_t total = turning_points(ts).count;
    // Smallest s whose mean turning points per bin (total * s / n) reaches 1,
    // i.e. bins wide enough to span about a half-period each.
    for (std::size_t s : divisors)
        if (total * s >= n) return BinPartition::equal_frequency(ts, s);
    // No divisor reaches it: minimize the mean, ties toward smaller s.
    std::size_t best = divisors.front();
    double best_mean = std::numeric_limits<double>::infinity();
    for (std::size_t s : divisors) {
        const double mean = double(total) * double(s) / double(n);
        if (mean < best_mean) {
            best_mean = mean;
            best = s;
        }
    }
    return BinPartition::equal_frequency(ts, best);
}

double mutual_information(const TimeSeries& ts, std::size_t tau, const BinPartition& bins) {
    require_imputed(ts, "mutual_information");
    const std::size_t n = ts.size();
    if (tau == 0 || tau >= n)
        throw std::invalid_argument("mutual_information: tau must satisfy 1 <= tau < n");
    const std::size_t pairs = n - tau;
    const std::size_t b = bins.bin_count;

    std::vector<std::uint64_t> keys;
    keys.reserve(pairs);
    std::vector<std::uint64_t> row(b, 0), col(b, 0);
    for (std::size_t i = 0; i < pairs; ++i) {
        const std::size_t k = bins.bin_of(ts.values[i]);
        const std::size_t l = bins.bin_of(ts.values[i + tau]);
        keys.push_back(static_cast<std::uint64_t>(k) * b + l);
        ++row[k];
        ++col[l];
    }
    std::sort(keys.begin(), keys.end());

    const double total = static_cast<double>(pairs);
    double info = 0.0;
    for (std::size_t i = 0; i < keys.size();) {
        std::size_t j = i;
        while (j < keys.size() && keys[j] == keys[i]) ++j;
        const std::size_t k = static_cast<std::size_t>(keys[i] / b);
        const std::size_t l = static_cast<std::size_t>(keys[i] % b);
        const double p_kl = double(j - i) / total;
        const double p_k = double(row[k]) / total;
        const double p_l = double(col[l]) / total;
        info += p_kl * std::log2(p_kl / (p_k * p_l));
        i = j;
    }
    return std::max(info, 0.0);
}

DelayEstimate estimate_delay(const TimeSeries& ts, std::size_t tau_max, const BinPartition& bins) {
    require_imputed(ts, "estimate_delay");
    if (tau_max < 1 || 2 * tau_max >= ts.size())
        throw std::invalid_argument("estimate_delay: require 1 <= tau_max < n/2");
    DelayEstimate est;
    est.mi_profile.reserve(tau_max);
    for (std::size_t tau = 1; tau <= tau_max; ++tau)
        est.mi_profile.emplace_back(tau, mutual_information(ts, tau, bins));

    auto value = [&](std::size_t tau) { return est.mi_profile[tau - 1].second; };
    double lo = value(1), hi = value(1);
    for (std::size_t tau = 2; tau <= tau_max; ++tau) {
        lo = std::min(lo, value(tau));
        hi = std::max(hi, value(tau));
    }
    // First prominent local minimum: the valley bottom once the profile has
    // climbed back by a quarter of its range. Smaller bumps are binning
    // artifacts, not minima.
    if (hi > lo) {
        const double rise = 0.25 * (hi - lo);
        double valley = value(1);
        std::size_t valley_tau = 1;
        for (std::size_t tau = 2; tau <= tau_max; ++tau) {
            if (value(tau) < valley) {
                valley = value(tau);
                valley_tau = tau;
            } else if (value(tau) - valley >= rise) {
                est.tau = valley_tau;
                return est;
            }
        }
    }
    std::size_t best = 1;
    for (std::size_t tau = 2; tau <= tau_max; ++tau)
        if (value(tau) < value(best)) best = tau;
    est.tau = best;
    return est;
}

DelayEstimate estimate_delay(const TimeSeries& ts, std::size_t tau_max) {
    return estimate_delay(ts, tau_max, choose_bin_size(ts));
}

double fnn_fraction(const TimeSeries& ts, std::size_t m, std::size_t tau, double epsilon) {
    require_imputed(ts, "fnn_fraction");
    if (m < 1 || tau < 1) throw std::invalid_argument("fnn_fraction: m and tau must be >= 1");
    if (epsilon <= 0.0) throw std::invalid_argument("fnn_fraction: epsilon must be positive");
    const std::size_t n = ts.size();
    if (n <= m * tau + 1)
        throw std::invalid_argument("fnn_fraction: series too short for (m, tau)");
    const std::size_t count = n - m * tau;  // points with the (m+1)-th coordinate available
    const double sigma = stddev(ts);
    if (sigma == 0.0) return 0.0;  // constant series: every gap is zero

    const auto& v = ts.values;
    std::size_t false_neighbors = 0;
    for (std::size_t i = 0; i < count; ++i) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_k = i;
        for (std::size_t k = 0; k < count; ++k) {
            if (k == i) continue;
            double d2 = 0.0;
            for (std::size_t j = 0; j < m && d2 < best; ++j) {
                const double diff = v[i + j * tau] - v[k + j * tau];
                d2 += diff * diff;
            }
            if (d2 < best) {
                best = d2;
                best_k = k;
            }
        }
        const double gap = std::abs(v[i + m * tau] - v[best_k + m * tau]);
        if (gap / sigma > epsilon) ++false_neighbors;
    }
    return double(false_neighbors) / double(count);
}

double fnn_default_epsilon(const TimeSeries& ts) { return 2.0 * stddev(ts); }

DimensionEstimate estimate_dimension(const TimeSeries& ts, std::size_t tau, std::size_t m_max,
                                     double tolerance) {
    require_imputed(ts, "estimate_dimension");
    if (m_max < 1) throw std::invalid_argument("estimate_dimension: m_max must be >= 1");
    if (ts.size() <= m_max * tau + 1)
        throw std::invalid_argument("estimate_dimension: series too short for m_max");
    const double sigma = stddev(ts);
    const double epsilon = sigma > 0.0 ? 2.0 * sigma : 1.0;

    DimensionEstimate est;
    est.fnn_profile.reserve(m_max);
    double minimum = std::numeric_limits<double>::infinity();
    for (std::size_t m = 1; m <= m_max; ++m) {
        const double frac = fnn_fraction(ts, m, tau, epsilon);
        est.fnn_profile.emplace_back(m, frac);
        minimum = std::min(minimum, frac);
    }
    for (const auto& [m, frac] : est.fnn_profile) {
        if (frac <= minimum + tolerance) {
            est.m = m;
            break;
        }
    }
    return est;
}

std::vector<TimeSeries> sample_windows(const TimeSeries& ts, std::size_t window_len,
                                       std::size_t count, std::uint64_t seed) {
    if (window_len == 0 || window_len > ts.size())
        throw std::invalid_argument("sample_windows: window_len must be in [1, n]");
    const std::size_t positions = ts.size() - window_len + 1;
    if (count > positions)
        throw std::invalid_argument("sample_windows: requested " + std::to_string(count) +
                                    " windows but only " + std::to_string(positions) +
                                    " start positions exist");
    std::vector<std::size_t> starts(positions);
    std::iota(starts.begin(), starts.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t j = i + bounded_rand(rng, positions - i);
        std::swap(starts[i], starts[j]);
    }
    std::vector<TimeSeries> windows;
    windows.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t s = starts[i];
        TimeSeries w;
        w.id = ts.id + ":" + std::to_string(s);
        w.values.assign(ts.values.begin() + s, ts.values.begin() + s + window_len);
        w.missing.assign(ts.missing.begin() + s, ts.missing.begin() + s + window_len);
        windows.push_back(std::move(w));
    }
    return windows;
}

}  // namespace tsph::signal
