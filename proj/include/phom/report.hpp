#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "phom/analysis.hpp"
#include "phom/config.hpp"

namespace phom {

struct ModelAnalysis {
  ModelKind model = ModelKind::kWae;
  ManifoldComparison reconstruction;  // original (first) vs reconstructed (second)
  PersistenceDiagram latent;
  ScatterResult scatter;
  std::vector<EpochStats> trace;
  double initial_reconstruction = 0.0;
  double final_reconstruction = 0.0;

  friend bool operator==(const ModelAnalysis&, const ModelAnalysis&) = default;
};

struct AnalysisReport {
  std::uint64_t seed = 0;
  Aggregation aggregation = Aggregation::kMax;
  std::string config_json;
  std::vector<ModelAnalysis> models;

  const ModelAnalysis* find(ModelKind kind) const;

  friend bool operator==(const AnalysisReport&, const AnalysisReport&) = default;
};

// The analysis pool: normal-class rows (optionally capped to max_rows by a
// seeded draw), plus every fraud row when include_fraud is set. The first
// `training_rows` entries are the training rows.
struct AnalysisRows {
  std::vector<std::size_t> rows;
  std::size_t training_rows = 0;
};
AnalysisRows select_rows(const Dataset& ds, const PipelineConfig& cfg);

// Training rows and the analysis pool of select_rows as feature matrices.
Matrix training_matrix(const Dataset& ds, const PipelineConfig& cfg);
Matrix analysis_pool(const Dataset& ds, const PipelineConfig& cfg);

// Bootstrap settings run_analysis uses for the scatter score.
ScatterConfig scatter_config(const PipelineConfig& cfg);

// The manifold sample run_analysis draws for `model`.
Manifolds sample_manifolds(const Matrix& pool, const AutoEncoder& model, const PipelineConfig& cfg);

// Trains each configured model on the normal rows, samples the three manifolds
// from the pool, and computes the reconstruction comparison, the latent
// diagram and the scatter score.
AnalysisReport run_analysis(const Dataset& ds, const PipelineConfig& cfg);

// Diagram files: header "dim,birth,death", one pair per line, "inf" for an
// essential death. Barcode files use the same columns in barcode order.
void write_diagram(std::ostream& os, const PersistenceDiagram& d);
PersistenceDiagram read_diagram(std::istream& is, const std::string& source = "<input>");
void save_diagram(const std::filesystem::path& path, const PersistenceDiagram& d);
PersistenceDiagram load_diagram(const std::filesystem::path& path);
void write_barcode(std::ostream& os, const Barcode& b);

// Plain numeric CSV, one point per line; a non-numeric first line is a header.
PointCloud load_point_cloud(const std::filesystem::path& path);
void save_point_cloud(const std::filesystem::path& path, const PointCloud& cloud);

// Writes config.json, summary.csv and per-model diagram, barcode, scatter and
// loss files into `out_dir` (created if missing).
void export_report(const AnalysisReport& report, const std::filesystem::path& out_dir);
AnalysisReport load_report(const std::filesystem::path& out_dir);

// Shortest text that parses back to exactly `v` ("inf" for +infinity).
std::string format_number(double v);
double parse_number(std::string_view text, const std::string& where);

}  // namespace phom
