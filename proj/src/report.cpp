#include "phom/report.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "phom/random.hpp"

namespace phom {
namespace fs = std::filesystem;
namespace {

// Sub-stream identifiers derived from the master seed.
enum Stream : std::uint64_t { kRowCap = 21, kExtract = 22, kScatter = 23 };

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) {
    if (!field.empty() && field.back() == '\r') field.pop_back();
    out.push_back(field);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string read_all(const fs::path& path) {
  auto in = open_in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string prefix(ModelKind m) { return std::string(to_string(m)); }

}  // namespace

std::string format_number(double v) {
  if (v == kInfinity) return "inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

double parse_number(std::string_view text, const std::string& where) {
  if (text == "inf") return kInfinity;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
    throw InputError(where + ": cannot parse '" + std::string(text) + "' as a number");
  return v;
}

const ModelAnalysis* AnalysisReport::find(ModelKind kind) const {
  for (const auto& m : models)
    if (m.model == kind) return &m;
  return nullptr;
}

AnalysisRows select_rows(const Dataset& ds, const PipelineConfig& cfg) {
  AnalysisRows out;
  auto normal = ds.rows_with_label(0);
  if (normal.size() < 2) throw InputError("dataset has fewer than 2 normal-class rows");
  if (cfg.max_rows > 0 && cfg.max_rows < normal.size()) {
    auto pick = subsample_indices(normal.size(), cfg.max_rows, derive_seed(cfg.train.seed, kRowCap));
    std::sort(pick.begin(), pick.end());
    std::vector<std::size_t> kept;
    for (auto i : pick) kept.push_back(normal[i]);
    normal = std::move(kept);
  }
  out.rows = normal;
  out.training_rows = normal.size();
  if (cfg.include_fraud)
    for (auto i : ds.rows_with_label(1)) out.rows.push_back(i);
  return out;
}

Matrix training_matrix(const Dataset& ds, const PipelineConfig& cfg) {
  const AnalysisRows selection = select_rows(ds, cfg);
  return take_rows(ds.features, std::span(selection.rows).first(selection.training_rows));
}

Matrix analysis_pool(const Dataset& ds, const PipelineConfig& cfg) {
  return take_rows(ds.features, select_rows(ds, cfg).rows);
}

ScatterConfig scatter_config(const PipelineConfig& cfg) {
  ScatterConfig sc;
  sc.rounds = cfg.scatter_rounds;
  sc.fraction = cfg.scatter_fraction;
  sc.seed = derive_seed(cfg.train.seed, kScatter);
  sc.aggregation = cfg.aggregation;
  return sc;
}

Manifolds sample_manifolds(const Matrix& pool, const AutoEncoder& model, const PipelineConfig& cfg) {
  if (cfg.samples > pool.rows())
    throw InputError("manifold sample size " + std::to_string(cfg.samples) + " exceeds the " +
                     std::to_string(pool.rows()) + " available rows");
  return extract_manifolds(pool, model, cfg.samples, derive_seed(cfg.train.seed, kExtract));
}

AnalysisReport run_analysis(const Dataset& ds, const PipelineConfig& cfg) {
  cfg.validate();
  const Matrix pool = analysis_pool(ds, cfg);
  const Matrix training = training_matrix(ds, cfg);
  if (cfg.samples > pool.rows())
    throw InputError("manifold sample size " + std::to_string(cfg.samples) + " exceeds the " +
                     std::to_string(pool.rows()) + " available rows");

  AnalysisReport report;
  report.seed = cfg.train.seed;
  report.aggregation = cfg.aggregation;
  report.config_json = to_json_string(cfg);
  for (ModelKind kind : cfg.models) {
    TrainConfig tc = cfg.train;
    tc.model = kind;
    TrainResult trained = train(training, tc);

    const Manifolds m = sample_manifolds(pool, trained.model, cfg);
    ModelAnalysis a;
    a.model = kind;
    a.reconstruction = compare_manifolds(m.original, m.reconstructed, {2, cfg.aggregation});
    a.latent = cloud_diagram(m.latent);
    a.scatter = scatter_score(m.latent, scatter_config(cfg));
    a.trace = std::move(trained.trace);
    a.initial_reconstruction = trained.initial_reconstruction;
    a.final_reconstruction = trained.final_reconstruction;
    report.models.push_back(std::move(a));
  }
  return report;
}

void write_diagram(std::ostream& os, const PersistenceDiagram& d) {
  os << "dim,birth,death\n";
  for (const auto& p : d.pairs) os << p.dim << ',' << format_number(p.birth) << ',' << format_number(p.death) << '\n';
}

void write_barcode(std::ostream& os, const Barcode& b) {
  os << "dim,birth,death\n";
  for (const auto& [dim, bars] : b.bars)
    for (const auto& iv : bars) os << dim << ',' << format_number(iv.birth) << ',' << format_number(iv.death) << '\n';
}

PersistenceDiagram read_diagram(std::istream& is, const std::string& source) {
  std::string line;
  if (!std::getline(is, line)) throw InputError(source + ": empty diagram file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "dim,birth,death") throw InputError(source + ": expected header 'dim,birth,death'");
  PersistenceDiagram d;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto f = split_line(line);
    const std::string where = source + ": line " + std::to_string(line_no);
    if (f.size() != 3) throw InputError(where + ": expected 3 fields");
    PersistencePair p;
    p.dim = static_cast<int>(parse_number(f[0], where));
    p.birth = parse_number(f[1], where);
    p.death = parse_number(f[2], where);
    if (p.dim < 0 || !(p.birth <= p.death)) throw InputError(where + ": invalid pair");
    d.pairs.push_back(p);
  }
  d.normalize();
  return d;
}

void save_diagram(const fs::path& path, const PersistenceDiagram& d) {
  auto out = open_out(path);
  write_diagram(out, d);
  finish(out, path);
}

PersistenceDiagram load_diagram(const fs::path& path) {
  auto in = open_in(path);
  return read_diagram(in, path.string());
}

PointCloud load_point_cloud(const fs::path& path) {
  auto in = open_in(path);
  std::string line;
  std::vector<double> values;
  std::size_t cols = 0, rows = 0, line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_line(line);
    const std::string where = path.string() + ": line " + std::to_string(line_no);
    if (rows == 0 && values.empty()) {
      double probe = 0.0;
      auto [ptr, ec] = std::from_chars(f[0].data(), f[0].data() + f[0].size(), probe);
      if (ec != std::errc() || ptr != f[0].data() + f[0].size()) continue;  // header
      cols = f.size();
    }
    if (f.size() != cols) throw InputError(where + ": expected " + std::to_string(cols) + " columns");
    for (const auto& s : f) values.push_back(parse_number(s, where));
    ++rows;
  }
  if (rows == 0) throw InputError(path.string() + ": no points");
  Matrix m(rows, cols);
  std::copy(values.begin(), values.end(), m.values().begin());
  return PointCloud(std::move(m));
}

void save_point_cloud(const fs::path& path, const PointCloud& cloud) {
  auto out = open_out(path);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    auto p = cloud.point(i);
    for (std::size_t c = 0; c < p.size(); ++c) out << (c ? "," : "") << format_number(p[c]);
    out << '\n';
  }
  finish(out, path);
}

void export_report(const AnalysisReport& report, const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create '" + out_dir.string() + "': " + ec.message());

  {
    const fs::path path = out_dir / "config.json";
    auto out = open_out(path);
    out << report.config_json;
    finish(out, path);
  }

  const fs::path summary_path = out_dir / "summary.csv";
  auto summary = open_out(summary_path);
  summary << "model,comparison,aggregation,value,seed\n";
  const std::string agg(to_string(report.aggregation));
  for (const auto& m : report.models) {
    const std::string name = prefix(m.model);
    auto row = [&](const char* what, double v) {
      summary << name << ',' << what << ',' << agg << ',' << format_number(v) << ',' << report.seed << '\n';
    };
    row("orig_vs_rec", m.reconstruction.distance.value);
    row("orig_vs_rec_h0", m.reconstruction.distance.per_dim[0]);
    row("orig_vs_rec_h1", m.reconstruction.distance.per_dim[1]);
    row("orig_vs_rec_threshold", m.reconstruction.threshold);
    row("scatter_mean", m.scatter.mean);
    row("scatter_max", m.scatter.max);
    row("scatter_rounds", static_cast<double>(m.scatter.rounds));
    row("scatter_subsample_size", static_cast<double>(m.scatter.subsample_size));
    row("scatter_threshold", m.scatter.threshold);
    row("latent_threshold", m.latent.threshold);
    row("train_initial_reconstruction", m.initial_reconstruction);
    row("train_final_reconstruction", m.final_reconstruction);
    row("train_epochs", static_cast<double>(m.trace.size()));

    auto diagram_files = [&](const char* tag, const PersistenceDiagram& d) {
      const fs::path dpath = out_dir / (name + "_" + tag + ".diagram.csv");
      save_diagram(dpath, d);
      const fs::path bpath = out_dir / (name + "_" + tag + ".barcode.csv");
      auto out = open_out(bpath);
      write_barcode(out, barcodes(d));
      finish(out, bpath);
    };
    diagram_files("original", m.reconstruction.first);
    diagram_files("reconstructed", m.reconstruction.second);
    diagram_files("latent", m.latent);

    {
      const fs::path path = out_dir / (name + "_scatter.csv");
      auto out = open_out(path);
      out << "round_a,round_b,value\n";
      std::size_t k = 0;
      for (std::size_t i = 0; i < m.scatter.rounds; ++i)
        for (std::size_t j = i + 1; j < m.scatter.rounds && k < m.scatter.pairwise.size(); ++j)
          out << i << ',' << j << ',' << format_number(m.scatter.pairwise[k++]) << '\n';
      finish(out, path);
    }
    {
      const fs::path path = out_dir / (name + "_loss.csv");
      auto out = open_out(path);
      out << "epoch,loss,reconstruction,regularizer\n";
      for (std::size_t e = 0; e < m.trace.size(); ++e)
        out << e << ',' << format_number(m.trace[e].loss) << ',' << format_number(m.trace[e].reconstruction)
            << ',' << format_number(m.trace[e].regularizer) << '\n';
      finish(out, path);
    }
  }
  finish(summary, summary_path);
}

AnalysisReport load_report(const fs::path& out_dir) {
  AnalysisReport report;
  report.config_json = read_all(out_dir / "config.json");

  const fs::path summary_path = out_dir / "summary.csv";
  auto in = open_in(summary_path);
  std::string line;
  std::getline(in, line);
  if (line != "model,comparison,aggregation,value,seed")
    throw InputError(summary_path.string() + ": unexpected header");
  std::map<ModelKind, std::map<std::string, double>> values;
  std::vector<ModelKind> order;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_line(line);
    const std::string where = summary_path.string() + ": line " + std::to_string(line_no);
    if (f.size() != 5) throw InputError(where + ": expected 5 fields");
    const ModelKind kind = parse_model_kind(f[0]);
    if (!values.contains(kind)) order.push_back(kind);
    values[kind][f[1]] = parse_number(f[3], where);
    report.aggregation = parse_aggregation(f[2]);
    report.seed = std::stoull(f[4]);
  }

  for (ModelKind kind : order) {
    const auto& v = values[kind];
    auto get = [&](const std::string& key) {
      auto it = v.find(key);
      if (it == v.end()) throw InputError(summary_path.string() + ": missing '" + key + "' for " + prefix(kind));
      return it->second;
    };
    const std::string name = prefix(kind);
    ModelAnalysis m;
    m.model = kind;
    m.reconstruction.distance.rule = report.aggregation;
    m.reconstruction.distance.value = get("orig_vs_rec");
    m.reconstruction.distance.per_dim = {get("orig_vs_rec_h0"), get("orig_vs_rec_h1")};
    m.reconstruction.threshold = get("orig_vs_rec_threshold");
    m.reconstruction.first = load_diagram(out_dir / (name + "_original.diagram.csv"));
    m.reconstruction.second = load_diagram(out_dir / (name + "_reconstructed.diagram.csv"));
    m.reconstruction.first.threshold = m.reconstruction.second.threshold = m.reconstruction.threshold;
    m.latent = load_diagram(out_dir / (name + "_latent.diagram.csv"));
    m.latent.threshold = get("latent_threshold");
    m.scatter.mean = get("scatter_mean");
    m.scatter.max = get("scatter_max");
    m.scatter.rounds = static_cast<std::size_t>(get("scatter_rounds"));
    m.scatter.subsample_size = static_cast<std::size_t>(get("scatter_subsample_size"));
    m.scatter.threshold = get("scatter_threshold");
    m.initial_reconstruction = get("train_initial_reconstruction");
    m.final_reconstruction = get("train_final_reconstruction");

    {
      const fs::path path = out_dir / (name + "_scatter.csv");
      auto sin = open_in(path);
      std::getline(sin, line);
      while (std::getline(sin, line)) {
        if (line.empty()) continue;
        const auto f = split_line(line);
        if (f.size() != 3) throw InputError(path.string() + ": expected 3 fields");
        m.scatter.pairwise.push_back(parse_number(f[2], path.string()));
      }
    }
    {
      const fs::path path = out_dir / (name + "_loss.csv");
      auto lin = open_in(path);
      std::getline(lin, line);
      while (std::getline(lin, line)) {
        if (line.empty()) continue;
        const auto f = split_line(line);
        if (f.size() != 4) throw InputError(path.string() + ": expected 4 fields");
        m.trace.push_back({parse_number(f[1], path.string()), parse_number(f[2], path.string()),
                           parse_number(f[3], path.string())});
      }
    }
    report.models.push_back(std::move(m));
  }
  return report;
}

}  // namespace phom
