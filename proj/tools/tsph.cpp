// Command line front end: parameter estimation, entropy filtering, feature
// extraction, a 1-NN baseline classifier, and deterministic exports.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tsph/pipeline.hpp"
#include "tsph/serialize.hpp"

namespace fs = std::filesystem;
using tsph::pipeline::PipelineConfig;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPartial = 1;  // some series failed; manifest still written
constexpr int kExitFatal = 2;

struct CommonOpts {
    std::string config_path;
    std::string input;
    std::string output;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> workers;
    std::optional<std::size_t> window_len;
    std::optional<std::string> tau;        // integer or "auto"
    std::optional<std::string> m;          // integer or "auto"
    std::optional<int> max_dim;
    std::optional<std::string> max_scale;  // number or "enclosing"
    std::optional<std::uint64_t> field_prime;
    std::optional<double> entropy_threshold;
    std::optional<std::size_t> curve_resolution;
    std::optional<std::size_t> windows;
    std::optional<std::string> mi_bins;  // integer or "auto"
    std::optional<std::string> delimiter;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_input) {
    cmd->add_option("--config", o.config_path, "flat JSON config file");
    auto* in = cmd->add_option("--input", o.input, "series file or directory");
    if (needs_input) in->required();
    cmd->add_option("--output", o.output, "output path")->required();
    cmd->add_option("--seed", o.seed, "RNG seed");
    cmd->add_option("--workers", o.workers, "parallel workers across series");
    cmd->add_option("--window-len", o.window_len, "sample window length");
    cmd->add_option("--tau", o.tau, "time delay, integer or 'auto'");
    cmd->add_option("--m", o.m, "embedding window extent, integer or 'auto'");
    cmd->add_option("--max-dim", o.max_dim, "maximal simplex dimension");
    cmd->add_option("--max-scale", o.max_scale, "Rips scale cap, number or 'enclosing'");
    cmd->add_option("--field-prime", o.field_prime, "coefficient field modulus");
    cmd->add_option("--entropy-threshold", o.entropy_threshold, "filter threshold in (0,1]");
    cmd->add_option("--curve-resolution", o.curve_resolution, "Betti curve resolution");
    cmd->add_option("--windows", o.windows, "windows drawn per series");
    cmd->add_option("--mi-bins", o.mi_bins,
                    "value bins for delay estimation: count for equal-width, or 'auto'");
    cmd->add_option("--delimiter", o.delimiter, "input column delimiter");
}

PipelineConfig build_config(const CommonOpts& o) {
    PipelineConfig cfg;
    if (!o.config_path.empty()) {
        std::ifstream in(o.config_path);
        if (!in) throw std::runtime_error("cannot open config " + o.config_path);
        nlohmann::json j;
        in >> j;
        cfg = tsph::serialize::config_from_json(j, cfg);
    }
    auto int_or_auto = [](const std::string& s, const char* what) -> std::size_t {
        if (s == "auto") return 0;
        try {
            return std::stoul(s);
        } catch (const std::exception&) {
            throw std::runtime_error(std::string(what) + ": expected integer or 'auto'");
        }
    };
    if (o.seed) cfg.seed = *o.seed;
    if (o.workers) cfg.workers = *o.workers;
    if (o.window_len) cfg.window_len = *o.window_len;
    if (o.tau) cfg.tau = int_or_auto(*o.tau, "--tau");
    if (o.m) cfg.m = int_or_auto(*o.m, "--m");
    if (o.max_dim) cfg.max_dim = *o.max_dim;
    if (o.max_scale) {
        if (*o.max_scale == "enclosing")
            cfg.max_scale.reset();
        else
            cfg.max_scale = std::stod(*o.max_scale);
    }
    if (o.field_prime) cfg.field_prime = *o.field_prime;
    if (o.entropy_threshold) cfg.entropy_threshold = *o.entropy_threshold;
    if (o.curve_resolution) cfg.curve_resolution = *o.curve_resolution;
    if (o.windows) cfg.windows_per_series = *o.windows;
    if (o.mi_bins) cfg.mi_width_bins = int_or_auto(*o.mi_bins, "--mi-bins");
    if (o.delimiter) {
        if (o.delimiter->size() != 1) throw std::runtime_error("--delimiter must be one character");
        cfg.delimiter = (*o.delimiter)[0];
    }
    cfg.validate();
    return cfg;
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

int run_export(const CommonOpts& opts, const std::string& what) {
    const auto cfg = build_config(opts);
    const auto inputs = tsph::pipeline::collect_inputs(opts.input);
    const fs::path outdir(opts.output);
    fs::create_directories(outdir);

    std::size_t failures = 0;
    for (const auto& path : inputs) {
        const std::string id = path.stem().string();
        try {
            auto ts = tsph::signal::impute_median(
                tsph::signal::load_series_file(path, tsph::signal::CsvFormat{cfg.delimiter}));
            tsph::signal::TimeSeries window = ts;
            if (window.size() > cfg.window_len) {
                window.values.resize(cfg.window_len);
                window.missing.resize(cfg.window_len);
            }
            const auto params = tsph::pipeline::resolve_embedding_params(window, cfg);
            const auto sd = tsph::pipeline::window_diagrams(window, cfg, params);
            if (what == "curves" && !(sd.max_scale > 0.0))
                throw std::runtime_error("degenerate window (all embedded points coincide)");
            if (what == "diagrams") {
                write_text(outdir / (id + ".diagrams.json"),
                           tsph::serialize::dump_stable(tsph::serialize::diagrams_bundle_to_json(sd)));
            } else {
                const tsph::represent::CurveGrid grid{0.0, sd.max_scale, cfg.effective_resolution()};
                const auto beta0 = tsph::represent::betti_curve(sd.diagrams.at(0), grid);
                const auto beta1 =
                    sd.diagrams.size() > 1
                        ? tsph::represent::betti_curve(sd.diagrams.at(1), grid)
                        : tsph::represent::SampledCurve{
                              grid, std::vector<double>(grid.resolution, 0.0)};
                write_text(outdir / (id + ".beta0.csv"), tsph::represent::curve_to_csv(beta0));
                write_text(outdir / (id + ".beta1.csv"), tsph::represent::curve_to_csv(beta1));
                write_text(outdir / (id + ".curves.json"),
                           tsph::serialize::dump_stable(
                               tsph::serialize::curves_bundle_to_json(id, beta0, beta1, sd)));
            }
        } catch (const std::exception& e) {
            ++failures;
            std::cerr << "export: " << id << ": " << e.what() << "\n";
        }
    }
    std::cout << "export: " << inputs.size() - failures << " ok, " << failures << " failed -> "
              << outdir.string() << "\n";
    return failures == 0 ? kExitOk : kExitPartial;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"topological feature extraction for one-dimensional sensor signals"};
    app.require_subcommand(1);

    CommonOpts params_opts, filter_opts, features_opts, classify_opts, export_opts;
    std::string labels_path, train_path, test_path, export_what = "diagrams";

    auto* cmd_params = app.add_subcommand("params", "estimate tau, M, and bin sizes per series");
    add_common(cmd_params, params_opts, true);

    auto* cmd_filter = app.add_subcommand("filter", "drop series with persistence entropy above threshold");
    add_common(cmd_filter, filter_opts, true);

    auto* cmd_features = app.add_subcommand("features", "extract raw/beta0/beta1 channels per window");
    add_common(cmd_features, features_opts, true);
    cmd_features->add_option("--labels", labels_path, "two-column id,label file");

    auto* cmd_classify = app.add_subcommand("classify", "1-NN baseline on feature datasets");
    add_common(cmd_classify, classify_opts, false);
    cmd_classify->add_option("--train", train_path, "training feature dataset (JSON)")->required();
    cmd_classify->add_option("--test", test_path, "test feature dataset (JSON)")->required();

    auto* cmd_export = app.add_subcommand("export", "write diagrams or Betti curves per series");
    add_common(cmd_export, export_opts, true);
    cmd_export->add_option("--what", export_what, "diagrams|curves")
        ->check(CLI::IsMember({"diagrams", "curves"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_params->parsed()) {
            const auto cfg = build_config(params_opts);
            const auto inputs = tsph::pipeline::collect_inputs(params_opts.input);
            const auto report = tsph::pipeline::run_params(inputs, cfg);
            write_text(params_opts.output,
                       tsph::serialize::dump_stable(tsph::serialize::params_report_to_json(report, cfg)));
            std::cout << "params: " << report.series.size() << " series, "
                      << report.failures.size() << " failed -> " << params_opts.output << "\n";
            return report.failures.empty() ? kExitOk : kExitPartial;
        }
        if (cmd_filter->parsed()) {
            const auto cfg = build_config(filter_opts);
            const auto inputs = tsph::pipeline::collect_inputs(filter_opts.input);
            const auto report = tsph::pipeline::run_filter(inputs, cfg);
            write_text(filter_opts.output,
                       tsph::serialize::dump_stable(tsph::serialize::filter_report_to_json(report, cfg)));
            std::size_t kept = 0;
            for (const auto& d : report.decisions) kept += d.kept ? 1 : 0;
            std::cout << "filter: kept " << kept << "/" << report.decisions.size() << ", "
                      << report.failures.size() << " failed -> " << filter_opts.output << "\n";
            return report.failures.empty() ? kExitOk : kExitPartial;
        }
        if (cmd_features->parsed()) {
            const auto cfg = build_config(features_opts);
            const auto inputs = tsph::pipeline::collect_inputs(features_opts.input);
            std::map<std::string, std::string> labels;
            if (!labels_path.empty()) labels = tsph::pipeline::load_labels(labels_path, cfg.delimiter);
            const auto ds = tsph::pipeline::run_features(inputs, labels, cfg);
            for (const auto& fv : ds.features)
                if (!labels.empty() && fv.label.empty())
                    std::cerr << "features: warning: no label for id " << fv.id << "\n";
            write_text(features_opts.output,
                       tsph::serialize::dump_stable(tsph::serialize::feature_dataset_to_json(ds)));
            std::cout << "features: " << ds.features.size() << " windows, "
                      << ds.failures.size() << " failed -> " << features_opts.output << "\n";
            return ds.failures.empty() ? kExitOk : kExitPartial;
        }
        if (cmd_classify->parsed()) {
            const auto cfg = build_config(classify_opts);
            auto read_dataset = [](const std::string& p) {
                std::ifstream in(p);
                if (!in) throw std::runtime_error("cannot open dataset " + p);
                nlohmann::json j;
                in >> j;
                return tsph::serialize::feature_dataset_from_json(j);
            };
            const auto train = read_dataset(train_path);
            const auto test = read_dataset(test_path);
            const auto report = tsph::pipeline::classify_baseline(train, test);
            write_text(classify_opts.output,
                       tsph::serialize::dump_stable(
                           tsph::serialize::classify_report_to_json(report, cfg)));
            std::cout << "classify: accuracy " << report.accuracy << " -> "
                      << classify_opts.output << "\n";
            return kExitOk;
        }
        if (cmd_export->parsed()) return run_export(export_opts, export_what);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFatal;
    }
    return kExitFatal;
}
