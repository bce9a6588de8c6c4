#include "phom/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace phom {

using nlohmann::json;

void PipelineConfig::validate() const {
  train.validate();
  if (models.empty()) throw InputError("at least one model must be selected");
  if (samples < 2) throw InputError("manifold sample size must be >= 2");
  if (scatter_rounds < 2) throw InputError("scatter rounds must be >= 2");
  if (!(scatter_fraction >= 0.5 && scatter_fraction < 1.0))
    throw InputError("scatter fraction must be in [0.5, 1)");
}

std::string to_json_string(const PipelineConfig& cfg) {
  const TrainConfig& t = cfg.train;
  json models = json::array();
  for (auto m : cfg.models) models.push_back(std::string(to_string(m)));
  json j = {
      {"seed", t.seed},
      {"models", models},
      {"lambda", t.lambda},
      {"lr", t.adam.lr},
      {"beta1", t.adam.beta1},
      {"beta2", t.adam.beta2},
      {"adam_eps", t.adam.eps},
      {"batch", t.batch},
      {"latent_dim", t.latent_dim},
      {"hidden", t.hidden},
      {"activation", std::string(to_string(t.activation))},
      {"epochs", t.epochs},
      {"patience", t.patience},
      {"min_improvement", t.min_improvement},
      {"kernel", std::string(to_string(t.kernel.family))},
      {"kernel_scale", t.kernel.scale},
      {"max_rows", cfg.max_rows},
      {"samples", cfg.samples},
      {"scatter_rounds", cfg.scatter_rounds},
      {"scatter_fraction", cfg.scatter_fraction},
      {"aggregation", std::string(to_string(cfg.aggregation))},
      {"include_fraud", cfg.include_fraud},
  };
  return j.dump(2) + "\n";
}

PipelineConfig pipeline_config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw InputError("config: top level must be an object");
  PipelineConfig cfg;
  TrainConfig& t = cfg.train;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "seed") t.seed = value.get<std::uint64_t>();
      else if (key == "models") {
        cfg.models.clear();
        for (const auto& m : value) cfg.models.push_back(parse_model_kind(m.get<std::string>()));
      }
      else if (key == "lambda") t.lambda = value.get<double>();
      else if (key == "lr") t.adam.lr = value.get<double>();
      else if (key == "beta1") t.adam.beta1 = value.get<double>();
      else if (key == "beta2") t.adam.beta2 = value.get<double>();
      else if (key == "adam_eps") t.adam.eps = value.get<double>();
      else if (key == "batch") t.batch = value.get<std::size_t>();
      else if (key == "latent_dim") t.latent_dim = value.get<std::size_t>();
      else if (key == "hidden") t.hidden = value.get<std::vector<std::size_t>>();
      else if (key == "activation") t.activation = parse_activation(value.get<std::string>());
      else if (key == "epochs") t.epochs = value.get<std::size_t>();
      else if (key == "patience") t.patience = value.get<std::size_t>();
      else if (key == "min_improvement") t.min_improvement = value.get<double>();
      else if (key == "kernel") t.kernel.family = parse_kernel_family(value.get<std::string>());
      else if (key == "kernel_scale") t.kernel.scale = value.get<double>();
      else if (key == "max_rows") cfg.max_rows = value.get<std::size_t>();
      else if (key == "samples") cfg.samples = value.get<std::size_t>();
      else if (key == "scatter_rounds") cfg.scatter_rounds = value.get<std::size_t>();
      else if (key == "scatter_fraction") cfg.scatter_fraction = value.get<double>();
      else if (key == "aggregation") cfg.aggregation = parse_aggregation(value.get<std::string>());
      else if (key == "include_fraud") cfg.include_fraud = value.get<bool>();
      else throw InputError("config: unknown key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return pipeline_config_from_json(buf.str());
}

}  // namespace phom
