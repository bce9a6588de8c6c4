#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "phom/bottleneck.hpp"
#include "phom/objectives.hpp"

namespace phom {

// Everything a full analysis run depends on. train.seed is the master seed;
// train.model is ignored by run_analysis, which trains every entry of `models`.
struct PipelineConfig {
  TrainConfig train{};
  std::vector<ModelKind> models = {ModelKind::kWae, ModelKind::kVae};
  std::size_t max_rows = 0;   // normal-class rows kept for training (0 = all)
  std::size_t samples = 100;  // points per manifold sample
  std::size_t scatter_rounds = 10;
  double scatter_fraction = 0.5;
  Aggregation aggregation = Aggregation::kMax;
  bool include_fraud = false;  // add fraud rows to the analysis pool

  void validate() const;

  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

std::string to_json_string(const PipelineConfig& cfg);
PipelineConfig pipeline_config_from_json(const std::string& text);
PipelineConfig load_pipeline_config(const std::filesystem::path& path);

}  // namespace phom
