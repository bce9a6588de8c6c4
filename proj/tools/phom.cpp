// Command-line front end: train, diagram, bottleneck, scatter, report.
//
// Options shared by the subcommands (seed, optimizer, model, scatter and
// sampling settings) may come from a JSON file given with --config; flags
// given on the command line override the file. --dump-config prints the
// effective configuration and exits.

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>

#include "phom/error.hpp"
#include "phom/report.hpp"

namespace {

using namespace phom;

// A flag bound to a scratch value, applied onto the effective config only if
// it was given.
class ConfigFlags {
 public:
  explicit ConfigFlags(CLI::App& app) : app_(app) {}

  template <typename T, typename Apply>
  void add(const std::string& name, const std::string& help, Apply apply) {
    auto value = std::make_shared<T>();
    CLI::Option* opt = app_.add_option(name, *value, help);
    opt->group("Configuration");
    flags_.push_back({opt, [value, apply](PipelineConfig& cfg) { apply(cfg, *value); }});
  }

  void add_flag(const std::string& name, const std::string& help, std::function<void(PipelineConfig&)> apply) {
    CLI::Option* opt = app_.add_flag(name, help);
    opt->group("Configuration");
    flags_.push_back({opt, std::move(apply)});
  }

  void apply(PipelineConfig& cfg) const {
    for (const auto& [opt, fn] : flags_)
      if (opt->count() > 0) fn(cfg);
  }

 private:
  CLI::App& app_;
  std::vector<std::pair<CLI::Option*, std::function<void(PipelineConfig&)>>> flags_;
};

void register_config_flags(ConfigFlags& f) {
  f.add<std::uint64_t>("--seed", "master seed", [](PipelineConfig& c, std::uint64_t v) { c.train.seed = v; });
  f.add<std::vector<std::string>>("--models", "models analysed by 'report' (wae, vae)",
                                  [](PipelineConfig& c, const std::vector<std::string>& v) {
                                    c.models.clear();
                                    for (const auto& m : v) c.models.push_back(parse_model_kind(m));
                                  });
  f.add<std::string>("--model", "model trained by 'train' (wae, vae)",
                     [](PipelineConfig& c, const std::string& v) { c.train.model = parse_model_kind(v); });
  f.add<double>("--lambda", "MMD penalty weight", [](PipelineConfig& c, double v) { c.train.lambda = v; });
  f.add<double>("--lr", "Adam learning rate", [](PipelineConfig& c, double v) { c.train.adam.lr = v; });
  f.add<double>("--beta1", "Adam beta1", [](PipelineConfig& c, double v) { c.train.adam.beta1 = v; });
  f.add<double>("--beta2", "Adam beta2", [](PipelineConfig& c, double v) { c.train.adam.beta2 = v; });
  f.add<double>("--adam-eps", "Adam epsilon", [](PipelineConfig& c, double v) { c.train.adam.eps = v; });
  f.add<std::size_t>("--batch", "minibatch size", [](PipelineConfig& c, std::size_t v) { c.train.batch = v; });
  f.add<std::size_t>("--latent-dim", "latent dimension",
                     [](PipelineConfig& c, std::size_t v) { c.train.latent_dim = v; });
  f.add<std::vector<std::size_t>>("--hidden", "hidden layer widths of the encoder",
                                  [](PipelineConfig& c, const std::vector<std::size_t>& v) { c.train.hidden = v; });
  f.add<std::string>("--activation", "hidden activation (tanh, relu, linear)",
                     [](PipelineConfig& c, const std::string& v) { c.train.activation = parse_activation(v); });
  f.add<std::size_t>("--epochs", "maximum number of epochs",
                     [](PipelineConfig& c, std::size_t v) { c.train.epochs = v; });
  f.add<std::size_t>("--patience", "early-stop patience in epochs (0 disables)",
                     [](PipelineConfig& c, std::size_t v) { c.train.patience = v; });
  f.add<double>("--min-improvement", "relative epoch-loss improvement that resets patience",
                [](PipelineConfig& c, double v) { c.train.min_improvement = v; });
  f.add<std::string>("--kernel", "MMD kernel (imq, gaussian)",
                     [](PipelineConfig& c, const std::string& v) { c.train.kernel.family = parse_kernel_family(v); });
  f.add<double>("--kernel-scale", "IMQ constant C or Gaussian bandwidth sigma^2",
                [](PipelineConfig& c, double v) { c.train.kernel.scale = v; });
  f.add<std::size_t>("--max-rows", "cap on normal-class training rows (0 = all)",
                     [](PipelineConfig& c, std::size_t v) { c.max_rows = v; });
  f.add<std::size_t>("--samples", "points per manifold sample",
                     [](PipelineConfig& c, std::size_t v) { c.samples = v; });
  f.add<std::size_t>("--rounds", "bootstrap rounds of the scatter score",
                     [](PipelineConfig& c, std::size_t v) { c.scatter_rounds = v; });
  f.add<double>("--fraction", "bootstrap subsample fraction, in [0.5, 1)",
                [](PipelineConfig& c, double v) { c.scatter_fraction = v; });
  f.add<std::string>("--aggregation", "combine H0/H1 distances by: max, dim0, dim1",
                     [](PipelineConfig& c, const std::string& v) { c.aggregation = parse_aggregation(v); });
  f.add_flag("--include-fraud", "add fraud rows to the analysis pool",
             [](PipelineConfig& c) { c.include_fraud = true; });
}

void print_kv(const std::string& key, const std::string& value) { std::cout << key << '=' << value << '\n'; }
void print_kv(const std::string& key, double value) { print_kv(key, format_number(value)); }

int run(int argc, char** argv) {
  CLI::App app{"Persistent-homology comparison of autoencoder manifolds"};
  app.fallthrough();
  app.require_subcommand(0, 1);

  std::string config_path;
  bool dump_config = false;
  app.add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
  app.add_flag("--dump-config", dump_config, "print the effective configuration as JSON and exit");
  ConfigFlags flags(app);
  register_config_flags(flags);

  auto* train_cmd = app.add_subcommand("train", "train one autoencoder and save a checkpoint");
  std::string data_path, checkpoint_path, trace_path, manifold_dir;
  train_cmd->add_option("--data", data_path, "transaction CSV")->required();
  train_cmd->add_option("--out", checkpoint_path, "checkpoint file to write")->required();
  train_cmd->add_option("--trace", trace_path, "write the per-epoch loss trace as CSV");
  train_cmd->add_option("--manifolds", manifold_dir,
                        "write original/latent/reconstructed point samples into this directory");

  auto* diagram_cmd = app.add_subcommand("diagram", "persistence diagram of a point cloud");
  std::string points_path, diagram_out, barcode_out;
  std::optional<double> threshold;
  int max_dim = 2;
  diagram_cmd->add_option("points", points_path, "point cloud CSV")->required();
  diagram_cmd->add_option("--out", diagram_out, "diagram file (default: stdout)");
  diagram_cmd->add_option("--barcode", barcode_out, "also write the barcode");
  diagram_cmd->add_option("--threshold", threshold, "filtration threshold (default: diameter)");
  diagram_cmd->add_option("--max-dim", max_dim, "maximum simplex dimension (1 or 2)");

  auto* bottleneck_cmd = app.add_subcommand("bottleneck", "bottleneck distance of two diagram files");
  std::string first_path, second_path;
  bottleneck_cmd->add_option("first", first_path, "diagram file")->required();
  bottleneck_cmd->add_option("second", second_path, "diagram file")->required();

  auto* scatter_cmd = app.add_subcommand("scatter", "bootstrap scatter score of a latent sample");
  std::string scatter_points, scatter_out;
  scatter_cmd->add_option("points", scatter_points, "latent point cloud CSV")->required();
  scatter_cmd->add_option("--out", scatter_out, "write the pairwise distances as CSV");

  auto* report_cmd = app.add_subcommand("report", "train every model, analyse and export");
  std::string report_data, report_dir;
  report_cmd->add_option("--data", report_data, "transaction CSV")->required();
  report_cmd->add_option("--out", report_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ExitCode::kInput);
  }

  PipelineConfig cfg = config_path.empty() ? PipelineConfig{} : load_pipeline_config(config_path);
  flags.apply(cfg);
  cfg.validate();

  if (dump_config) {
    std::cout << to_json_string(cfg) << '\n';
    return 0;
  }

  if (*train_cmd) {
    const Dataset ds = load_csv(data_path);
    const TrainResult result = train(training_matrix(ds, cfg), cfg.train);
    save_checkpoint(checkpoint_path, result.model);
    if (!trace_path.empty()) {
      std::ofstream out(trace_path);
      out << "epoch,loss,reconstruction,regularizer\n";
      for (std::size_t e = 0; e < result.trace.size(); ++e)
        out << e << ',' << format_number(result.trace[e].loss) << ','
            << format_number(result.trace[e].reconstruction) << ','
            << format_number(result.trace[e].regularizer) << '\n';
      if (!out) throw IoError("cannot write '" + trace_path + "'");
    }
    if (!manifold_dir.empty()) {
      const Manifolds m = sample_manifolds(analysis_pool(ds, cfg), result.model, cfg);
      std::filesystem::create_directories(manifold_dir);
      const std::filesystem::path dir(manifold_dir);
      save_point_cloud(dir / "original.csv", m.original);
      save_point_cloud(dir / "latent.csv", m.latent);
      save_point_cloud(dir / "reconstructed.csv", m.reconstructed);
    }
    print_kv("model", std::string(to_string(cfg.train.model)));
    print_kv("seed", std::to_string(cfg.train.seed));
    print_kv("epochs", std::to_string(result.trace.size()));
    print_kv("initial_reconstruction", result.initial_reconstruction);
    print_kv("final_reconstruction", result.final_reconstruction);
    return 0;
  }

  if (*diagram_cmd) {
    const DistanceMatrix d = distance_matrix(load_point_cloud(points_path));
    const Filtration f = threshold ? build_vr(d, max_dim, *threshold) : build_vr(d, max_dim);
    const PersistenceDiagram dgm = compute_persistence(f);
    if (diagram_out.empty())
      write_diagram(std::cout, dgm);
    else
      save_diagram(diagram_out, dgm);
    if (!barcode_out.empty()) {
      std::ofstream out(barcode_out);
      write_barcode(out, barcodes(dgm));
      if (!out) throw IoError("cannot write '" + barcode_out + "'");
    }
    return 0;
  }

  if (*bottleneck_cmd) {
    const auto r = combined_bottleneck(load_diagram(first_path), load_diagram(second_path), cfg.aggregation);
    print_kv("h0", r.per_dim[0]);
    print_kv("h1", r.per_dim[1]);
    print_kv("aggregation", std::string(to_string(r.rule)));
    print_kv("value", r.value);
    return 0;
  }

  if (*scatter_cmd) {
    ScatterConfig sc;
    sc.rounds = cfg.scatter_rounds;
    sc.fraction = cfg.scatter_fraction;
    sc.seed = cfg.train.seed;
    sc.aggregation = cfg.aggregation;
    const ScatterResult r = scatter_score(load_point_cloud(scatter_points), sc);
    if (!scatter_out.empty()) {
      std::ofstream out(scatter_out);
      out << "round_a,round_b,value\n";
      std::size_t k = 0;
      for (std::size_t a = 0; a < r.rounds; ++a)
        for (std::size_t b = a + 1; b < r.rounds; ++b) out << a << ',' << b << ',' << format_number(r.pairwise[k++]) << '\n';
      if (!out) throw IoError("cannot write '" + scatter_out + "'");
    }
    print_kv("seed", std::to_string(sc.seed));
    print_kv("rounds", std::to_string(r.rounds));
    print_kv("subsample_size", std::to_string(r.subsample_size));
    print_kv("aggregation", std::string(to_string(sc.aggregation)));
    print_kv("mean", r.mean);
    print_kv("max", r.max);
    return 0;
  }

  if (*report_cmd) {
    const AnalysisReport report = run_analysis(load_csv(report_data), cfg);
    export_report(report, report_dir);
    std::cout << "model,orig_vs_rec,scatter,seed\n";
    for (const auto& m : report.models)
      std::cout << to_string(m.model) << ',' << format_number(m.reconstruction.distance.value) << ','
                << format_number(m.scatter.mean) << ',' << report.seed << '\n';
    return 0;
  }

  std::cerr << app.help();
  return static_cast<int>(ExitCode::kInput);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const phom::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(phom::ExitCode::kInput);
  } catch (const phom::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return static_cast<int>(phom::ExitCode::kNumerical);
  } catch (const phom::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return static_cast<int>(phom::ExitCode::kIo);
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return static_cast<int>(phom::ExitCode::kIo);
  }
}
