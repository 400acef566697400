#include "tsph/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace tsph::serialize {

using nlohmann::json;

namespace {

void append_escaped(std::string& out, const std::string& s) {
    out.push_back('"');
    for (unsigned char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (c < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out.push_back(char(c));
                }
        }
    }
    out.push_back('"');
}

void append_value(std::string& out, const json& j) {
    switch (j.type()) {
        case json::value_t::null: out += "null"; break;
        case json::value_t::boolean: out += j.get<bool>() ? "true" : "false"; break;
        case json::value_t::number_integer:
            out += std::to_string(j.get<std::int64_t>());
            break;
        case json::value_t::number_unsigned:
            out += std::to_string(j.get<std::uint64_t>());
            break;
        case json::value_t::number_float: {
            const double v = j.get<double>();
            if (!std::isfinite(v)) {
                out += "null";
                break;
            }
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out += buf;
            break;
        }
        case json::value_t::string: append_escaped(out, j.get_ref<const std::string&>()); break;
        case json::value_t::array: {
            out.push_back('[');
            bool first = true;
            for (const auto& item : j) {
                if (!first) out.push_back(',');
                first = false;
                append_value(out, item);
            }
            out.push_back(']');
            break;
        }
        case json::value_t::object: {
            out.push_back('{');
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {  // std::map order: sorted keys
                if (!first) out.push_back(',');
                first = false;
                append_escaped(out, it.key());
                out.push_back(':');
                append_value(out, it.value());
            }
            out.push_back('}');
            break;
        }
        default: throw std::runtime_error("dump_stable: unsupported value type");
    }
}

json curve_values(const std::vector<double>& v) {
    json arr = json::array();
    for (double x : v) arr.push_back(x);
    return arr;
}

json entropy_or_null(const persistence::PersistenceDiagram& d, double substitute) {
    const auto finite = represent::finitize(d, substitute);
    if (finite.pairs.size() < 2) return nullptr;
    return represent::persistence_entropy(finite, true);
}

}  // namespace

std::string dump_stable(const json& j) {
    std::string out;
    append_value(out, j);
    out.push_back('\n');
    return out;
}

json config_to_json(const pipeline::PipelineConfig& cfg) {
    json j;
    j["window_len"] = cfg.window_len;
    j["tau"] = cfg.tau == 0 ? json("auto") : json(cfg.tau);
    j["m"] = cfg.m == 0 ? json("auto") : json(cfg.m);
    j["max_dim"] = cfg.max_dim;
    j["max_scale"] = cfg.max_scale ? json(*cfg.max_scale) : json("enclosing");
    j["field_prime"] = cfg.field_prime;
    j["silhouette_power"] = cfg.silhouette_power;
    j["entropy_threshold"] = cfg.entropy_threshold;
    j["curve_resolution"] = cfg.effective_resolution();
    j["seed"] = cfg.seed;
    j["windows_per_series"] = cfg.windows_per_series;
    j["tau_max"] = cfg.tau_max == 0 ? json("auto") : json(cfg.tau_max);
    j["m_max"] = cfg.m_max;
    j["mi_bins"] = cfg.mi_width_bins == 0 ? json("auto") : json(cfg.mi_width_bins);
    switch (cfg.entropy_dims) {
        case pipeline::EntropyDims::combined: j["entropy_dims"] = "combined"; break;
        case pipeline::EntropyDims::h0: j["entropy_dims"] = "h0"; break;
        case pipeline::EntropyDims::h1: j["entropy_dims"] = "h1"; break;
    }
    j["delimiter"] = std::string(1, cfg.delimiter);
    j["workers"] = cfg.workers;
    return j;
}

pipeline::PipelineConfig config_from_json(const json& j, pipeline::PipelineConfig base) {
    if (!j.is_object()) throw std::invalid_argument("config: expected a flat JSON object");
    auto int_or_auto = [](const json& v, const char* key) -> std::size_t {
        if (v.is_string()) {
            if (v.get<std::string>() == "auto") return 0;
            throw std::invalid_argument(std::string("config: ") + key + ": expected integer or \"auto\"");
        }
        return v.get<std::size_t>();
    };
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& key = it.key();
        const json& v = it.value();
        if (key == "window_len") base.window_len = v.get<std::size_t>();
        else if (key == "tau") base.tau = int_or_auto(v, "tau");
        else if (key == "m") base.m = int_or_auto(v, "m");
        else if (key == "max_dim") base.max_dim = v.get<int>();
        else if (key == "max_scale") {
            if (v.is_string()) {
                if (v.get<std::string>() != "enclosing")
                    throw std::invalid_argument("config: max_scale: expected number or \"enclosing\"");
                base.max_scale.reset();
            } else {
                base.max_scale = v.get<double>();
            }
        } else if (key == "field_prime") base.field_prime = v.get<std::uint64_t>();
        else if (key == "silhouette_power") base.silhouette_power = v.get<double>();
        else if (key == "entropy_threshold") base.entropy_threshold = v.get<double>();
        else if (key == "curve_resolution") base.curve_resolution = v.get<std::size_t>();
        else if (key == "seed") base.seed = v.get<std::uint64_t>();
        else if (key == "windows_per_series") base.windows_per_series = v.get<std::size_t>();
        else if (key == "tau_max") base.tau_max = int_or_auto(v, "tau_max");
        else if (key == "m_max") base.m_max = v.get<std::size_t>();
        else if (key == "mi_bins") base.mi_width_bins = int_or_auto(v, "mi_bins");
        else if (key == "entropy_dims") {
            const auto s = v.get<std::string>();
            if (s == "combined") base.entropy_dims = pipeline::EntropyDims::combined;
            else if (s == "h0") base.entropy_dims = pipeline::EntropyDims::h0;
            else if (s == "h1") base.entropy_dims = pipeline::EntropyDims::h1;
            else throw std::invalid_argument("config: entropy_dims: combined|h0|h1");
        } else if (key == "delimiter") {
            const auto s = v.get<std::string>();
            if (s.size() != 1) throw std::invalid_argument("config: delimiter must be one character");
            base.delimiter = s[0];
        } else if (key == "workers") base.workers = v.get<std::size_t>();
        else throw std::invalid_argument("config: unknown key \"" + key + "\"");
    }
    return base;
}

json diagram_to_json(const persistence::PersistenceDiagram& d) {
    json pairs = json::array();
    for (const auto& p : d.pairs) {
        json pair = json::array();
        pair.push_back(p.birth);
        if (p.essential())
            pair.push_back(nullptr);
        else
            pair.push_back(p.death);
        pairs.push_back(std::move(pair));
    }
    json j;
    j["dim"] = d.dim;
    j["pairs"] = std::move(pairs);
    return j;
}

persistence::PersistenceDiagram diagram_from_json(const json& j) {
    persistence::PersistenceDiagram d;
    d.dim = j.at("dim").get<int>();
    for (const auto& pair : j.at("pairs")) {
        const double birth = pair.at(0).get<double>();
        const double death =
            pair.at(1).is_null() ? persistence::kInfiniteDeath : pair.at(1).get<double>();
        d.pairs.push_back({birth, death});
    }
    return d;
}

json params_report_to_json(const pipeline::ParamsReport& r, const pipeline::PipelineConfig& cfg) {
    json series = json::array();
    for (const auto& sp : r.series) {
        json s;
        s["id"] = sp.id;
        s["length"] = sp.length;
        s["sigma"] = sp.sigma;
        s["turning_points"] = sp.turning_points;
        s["bin_size"] = sp.bin_size;
        s["bin_count"] = sp.bin_count;
        s["tau"] = sp.delay.tau;
        json mi = json::array();
        for (const auto& [tau, bits] : sp.delay.mi_profile) mi.push_back(json::array({tau, bits}));
        s["mi_profile"] = std::move(mi);
        s["degenerate_mi"] = sp.degenerate_mi;
        s["m"] = sp.dimension.m;
        json fnn = json::array();
        for (const auto& [m, f] : sp.dimension.fnn_profile) fnn.push_back(json::array({m, f}));
        s["fnn_profile"] = std::move(fnn);
        series.push_back(std::move(s));
    }
    json failures = json::array();
    for (const auto& f : r.failures) failures.push_back({{"id", f.id}, {"error", f.error}});
    json j;
    j["config"] = config_to_json(cfg);
    j["series"] = std::move(series);
    j["failures"] = std::move(failures);
    return j;
}

json filter_report_to_json(const pipeline::FilterReport& r, const pipeline::PipelineConfig& cfg) {
    json decisions = json::array();
    std::size_t kept = 0;
    for (const auto& d : r.decisions) {
        decisions.push_back({{"id", d.id}, {"entropy", d.entropy}, {"kept", d.kept}});
        if (d.kept) ++kept;
    }
    json failures = json::array();
    for (const auto& f : r.failures) failures.push_back({{"id", f.id}, {"error", f.error}});
    json j;
    j["config"] = config_to_json(cfg);
    j["decisions"] = std::move(decisions);
    j["kept_count"] = kept;
    j["dropped_count"] = r.decisions.size() - kept;
    j["failures"] = std::move(failures);
    return j;
}

json feature_dataset_to_json(const pipeline::FeatureDataset& ds) {
    json features = json::array();
    for (const auto& fv : ds.features) {
        json f;
        f["id"] = fv.id;
        f["label"] = fv.label;
        f["window_start"] = fv.window_start;
        f["tau"] = fv.tau;
        f["m"] = fv.m;
        f["max_scale"] = fv.max_scale;
        f["raw"] = curve_values(fv.raw);
        f["beta0"] = curve_values(fv.beta0);
        f["beta1"] = curve_values(fv.beta1);
        features.push_back(std::move(f));
    }
    json failures = json::array();
    for (const auto& f : ds.failures) failures.push_back({{"id", f.id}, {"error", f.error}});
    json j;
    j["config"] = config_to_json(ds.config);
    j["features"] = std::move(features);
    j["failures"] = std::move(failures);
    return j;
}

pipeline::FeatureDataset feature_dataset_from_json(const json& j) {
    pipeline::FeatureDataset ds;
    ds.config = config_from_json(j.at("config"));
    for (const auto& f : j.at("features")) {
        pipeline::FeatureVector fv;
        fv.id = f.at("id").get<std::string>();
        fv.label = f.at("label").get<std::string>();
        fv.window_start = f.at("window_start").get<std::size_t>();
        fv.tau = f.at("tau").get<std::size_t>();
        fv.m = f.at("m").get<std::size_t>();
        fv.max_scale = f.at("max_scale").get<double>();
        fv.raw = f.at("raw").get<std::vector<double>>();
        fv.beta0 = f.at("beta0").get<std::vector<double>>();
        fv.beta1 = f.at("beta1").get<std::vector<double>>();
        ds.features.push_back(std::move(fv));
    }
    for (const auto& f : j.at("failures"))
        ds.failures.push_back({f.at("id").get<std::string>(), f.at("error").get<std::string>()});
    return ds;
}

json classify_report_to_json(const pipeline::ClassifyReport& r,
                             const pipeline::PipelineConfig& cfg) {
    json per_class = json::array();
    for (const auto& cm : r.per_class) {
        per_class.push_back({{"label", cm.label},
                             {"support", cm.support},
                             {"precision", cm.precision},
                             {"recall", cm.recall},
                             {"f1", cm.f1}});
    }
    json j;
    j["config"] = config_to_json(cfg);
    j["train_size"] = r.train_size;
    j["test_size"] = r.test_size;
    j["accuracy"] = r.accuracy;
    j["macro_precision"] = r.macro_precision;
    j["macro_recall"] = r.macro_recall;
    j["macro_f1"] = r.macro_f1;
    j["per_class"] = std::move(per_class);
    j["single_class"] = r.single_class;
    return j;
}

json diagrams_bundle_to_json(const pipeline::SeriesDiagrams& sd) {
    json diagrams = json::array();
    json entropies = json::array();
    for (const auto& d : sd.diagrams) {
        diagrams.push_back(diagram_to_json(d));
        entropies.push_back(entropy_or_null(d, sd.max_scale));
    }
    json j;
    j["id"] = sd.id;
    j["max_scale"] = sd.max_scale;
    j["diagrams"] = std::move(diagrams);
    j["entropies"] = std::move(entropies);
    return j;
}

json curves_bundle_to_json(const std::string& id, const represent::SampledCurve& beta0,
                           const represent::SampledCurve& beta1,
                           const pipeline::SeriesDiagrams& sd) {
    json j;
    j["id"] = id;
    j["grid"] = {{"lo", beta0.grid.lo}, {"hi", beta0.grid.hi}, {"resolution", beta0.grid.resolution}};
    j["beta0_curve"] = curve_values(beta0.values);
    j["beta1_curve"] = curve_values(beta1.values);
    j["entropy0"] = sd.diagrams.size() > 0 ? entropy_or_null(sd.diagrams[0], sd.max_scale) : json(nullptr);
    j["entropy1"] = sd.diagrams.size() > 1 ? entropy_or_null(sd.diagrams[1], sd.max_scale) : json(nullptr);
    return j;
}

}  // namespace tsph::serialize
