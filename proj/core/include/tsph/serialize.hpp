#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "tsph/pipeline.hpp"

namespace tsph::serialize {

/// Deterministic JSON text: keys sorted, doubles printed with 17 significant
/// digits, no locale dependence. Identical values give identical bytes.
std::string dump_stable(const nlohmann::json& j);

nlohmann::json config_to_json(const pipeline::PipelineConfig& cfg);
pipeline::PipelineConfig config_from_json(const nlohmann::json& j,
                                          pipeline::PipelineConfig base = {});

/// {"dim": k, "pairs": [[birth, death-or-null], ...]} sorted by (birth, death).
nlohmann::json diagram_to_json(const persistence::PersistenceDiagram& d);
persistence::PersistenceDiagram diagram_from_json(const nlohmann::json& j);

nlohmann::json params_report_to_json(const pipeline::ParamsReport& r,
                                     const pipeline::PipelineConfig& cfg);
nlohmann::json filter_report_to_json(const pipeline::FilterReport& r,
                                     const pipeline::PipelineConfig& cfg);
nlohmann::json feature_dataset_to_json(const pipeline::FeatureDataset& ds);
pipeline::FeatureDataset feature_dataset_from_json(const nlohmann::json& j);
nlohmann::json classify_report_to_json(const pipeline::ClassifyReport& r,
                                       const pipeline::PipelineConfig& cfg);

/// Export bundle for one series: diagrams plus per-dimension normalized
/// entropies (null when fewer than two bars).
nlohmann::json diagrams_bundle_to_json(const pipeline::SeriesDiagrams& sd);

/// {id, beta0_curve, beta1_curve, entropy0, entropy1} for one window.
nlohmann::json curves_bundle_to_json(const std::string& id,
                                     const represent::SampledCurve& beta0,
                                     const represent::SampledCurve& beta1,
                                     const pipeline::SeriesDiagrams& sd);

}  // namespace tsph::serialize
