#include "phom/training.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "phom/random.hpp"

namespace phom {
namespace {

// Sub-stream identifiers derived from TrainConfig::seed.
enum Stream : std::uint64_t { kInitEncoder = 11, kInitDecoder = 12, kShuffle = 13, kNoise = 14 };

std::vector<std::size_t> shuffled(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  return order;
}

Matrix concat_cols(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows(), a.cols() + b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = a(r, c);
    for (std::size_t c = 0; c < b.cols(); ++c) out(r, a.cols() + c) = b(r, c);
  }
  return out;
}

void add_into(Matrix& target, const Matrix& source) {
  auto t = target.values();
  auto s = source.values();
  for (std::size_t i = 0; i < t.size(); ++i) t[i] += s[i];
}

}  // namespace

Matrix AutoEncoder::encode(const Matrix& x) const {
  Matrix code = predict(encoder, x);
  return kind == ModelKind::kVae ? take_cols(code, 0, latent_dim) : code;
}

Matrix AutoEncoder::decode(const Matrix& z) const { return predict(decoder, z); }

AutoEncoder make_autoencoder(std::size_t input_dim, const TrainConfig& cfg) {
  cfg.validate();
  AutoEncoder m;
  m.kind = cfg.model;
  m.latent_dim = cfg.latent_dim;
  const std::size_t code_width = cfg.model == ModelKind::kVae ? 2 * cfg.latent_dim : cfg.latent_dim;

  std::vector<std::size_t> enc_widths{input_dim};
  enc_widths.insert(enc_widths.end(), cfg.hidden.begin(), cfg.hidden.end());
  enc_widths.push_back(code_width);
  std::vector<std::size_t> dec_widths{cfg.latent_dim};
  dec_widths.insert(dec_widths.end(), cfg.hidden.rbegin(), cfg.hidden.rend());
  dec_widths.push_back(input_dim);

  m.encoder = Mlp::glorot(enc_widths, cfg.activation, Activation::kLinear,
                          derive_seed(cfg.seed, kInitEncoder));
  m.decoder = Mlp::glorot(dec_widths, cfg.activation, Activation::kLinear,
                          derive_seed(cfg.seed, kInitDecoder));
  return m;
}

namespace {

BatchGradients wae_step(const AutoEncoder& m, const Matrix& x, const TrainConfig& cfg,
                        std::uint64_t noise_seed) {
  auto enc = forward(m.encoder, x);
  auto dec = forward(m.decoder, enc.output);
  const Matrix zp = sample_prior(x.rows(), m.latent_dim, noise_seed);
  WaeLoss loss = wae_loss(x, dec.output, enc.output, zp, cfg);
  BatchGradients out;
  out.stats = {loss.value, loss.reconstruction, loss.penalty};
  out.decoder_grads = backward(m.decoder, dec.tape, loss.grad_x_rec);
  Matrix code_grad = out.decoder_grads.input;
  add_into(code_grad, loss.grad_zq);
  out.encoder_grads = backward(m.encoder, enc.tape, code_grad);
  return out;
}

BatchGradients vae_step(const AutoEncoder& m, const Matrix& x, std::uint64_t noise_seed) {
  auto enc = forward(m.encoder, x);
  const Matrix mean = take_cols(enc.output, 0, m.latent_dim);
  const Matrix log_var = take_cols(enc.output, m.latent_dim, m.latent_dim);
  const Reparameterized rp = reparameterize(mean, log_var, noise_seed);
  auto dec = forward(m.decoder, rp.z);
  VaeLoss loss = vae_loss(x, dec.output, mean, log_var);
  BatchGradients out;
  out.stats = {loss.value, loss.reconstruction, loss.kl};
  out.decoder_grads = backward(m.decoder, dec.tape, loss.grad_x_rec);
  auto [d_mean, d_log_var] = reparameterize_backward(out.decoder_grads.input, log_var, rp.noise);
  add_into(d_mean, loss.grad_mean);
  add_into(d_log_var, loss.grad_log_var);
  out.encoder_grads = backward(m.encoder, enc.tape, concat_cols(d_mean, d_log_var));
  return out;
}

}  // namespace

BatchGradients batch_gradients(const AutoEncoder& model, const Matrix& x, const TrainConfig& cfg,
                               std::uint64_t noise_seed) {
  return model.kind == ModelKind::kWae ? wae_step(model, x, cfg, noise_seed) : vae_step(model, x, noise_seed);
}

TrainResult train(const Matrix& data, const TrainConfig& cfg) {
  cfg.validate();
  if (data.rows() < 2) throw InputError("train: need at least 2 training rows");
  TrainResult result;
  result.model = make_autoencoder(data.cols(), cfg);
  AutoEncoder& m = result.model;
  result.initial_reconstruction = reconstruction_cost(data, m.decode(m.encode(data)));

  AdamState enc_state = AdamState::zeros_like(m.encoder, cfg.adam);
  AdamState dec_state = AdamState::zeros_like(m.decoder, cfg.adam);

  std::uint64_t step = 0;
  std::size_t stalled = 0;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto order = shuffled(data.rows(), derive_seed(derive_seed(cfg.seed, kShuffle), epoch));
    EpochStats sums;
    std::size_t seen = 0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch) {
      const std::size_t count = std::min(cfg.batch, order.size() - start);
      if (count < 2) continue;
      const Matrix x = take_rows(data, std::span(order).subspan(start, count));
      const std::uint64_t noise_seed = derive_seed(derive_seed(cfg.seed, kNoise), step++);
      BatchGradients s = batch_gradients(m, x, cfg, noise_seed);
      if (!std::isfinite(s.stats.loss))
        throw NumericalError("training diverged: non-finite loss at epoch " + std::to_string(epoch) +
                             " (try a smaller learning rate or lambda)");
      adam_step(m.encoder, s.encoder_grads, enc_state);
      adam_step(m.decoder, s.decoder_grads, dec_state);
      const double w = static_cast<double>(count);
      sums.loss += w * s.stats.loss;
      sums.reconstruction += w * s.stats.reconstruction;
      sums.regularizer += w * s.stats.regularizer;
      seen += count;
    }
    const double inv = 1.0 / static_cast<double>(seen);
    EpochStats mean{sums.loss * inv, sums.reconstruction * inv, sums.regularizer * inv};
    if (!result.trace.empty() && cfg.patience > 0) {
      const double prev = result.trace.back().loss;
      const double improvement = (prev - mean.loss) / std::max(std::abs(prev), 1e-12);
      stalled = improvement < cfg.min_improvement ? stalled + 1 : 0;
    }
    result.trace.push_back(mean);
    if (cfg.patience > 0 && stalled >= cfg.patience) break;
  }
  result.final_reconstruction = reconstruction_cost(data, m.decode(m.encode(data)));
  if (!std::isfinite(result.final_reconstruction))
    throw NumericalError("training produced a non-finite reconstruction (try a smaller learning rate)");
  return result;
}

TrainResult train(const Dataset& ds, const TrainConfig& cfg) {
  const auto rows = ds.rows_with_label(0);
  return train(take_rows(ds.features, rows), cfg);
}

void write_autoencoder(std::ostream& os, const AutoEncoder& model) {
  os << "autoencoder " << to_string(model.kind) << ' ' << model.latent_dim << '\n';
  write_mlp(os, model.encoder);
  write_mlp(os, model.decoder);
}

AutoEncoder read_autoencoder(std::istream& is) {
  std::string tag, kind;
  AutoEncoder m;
  if (!(is >> tag >> kind >> m.latent_dim) || tag != "autoencoder")
    throw InputError("checkpoint: missing 'autoencoder' header");
  m.kind = parse_model_kind(kind);
  m.encoder = read_mlp(is);
  m.decoder = read_mlp(is);
  const std::size_t code_width = m.kind == ModelKind::kVae ? 2 * m.latent_dim : m.latent_dim;
  if (m.encoder.output_width() != code_width || m.decoder.input_width() != m.latent_dim ||
      m.decoder.output_width() != m.encoder.input_width())
    throw InputError("checkpoint: encoder/decoder shapes do not match the header");
  return m;
}

void save_checkpoint(const std::filesystem::path& path, const AutoEncoder& model) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_autoencoder(out, model);
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

AutoEncoder load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return read_autoencoder(in);
}

}  // namespace phom
