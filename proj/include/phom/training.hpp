#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "phom/dataset.hpp"
#include "phom/neural.hpp"
#include "phom/objectives.hpp"

namespace phom {

// Encoder/decoder pair. A VAE encoder emits [mean | log_var], 2 * latent_dim
// columns; a WAE encoder emits the latent code directly.
struct AutoEncoder {
  ModelKind kind = ModelKind::kWae;
  std::size_t latent_dim = 2;
  Mlp encoder;
  Mlp decoder;

  // Deterministic latent code (the posterior mean for a VAE).
  Matrix encode(const Matrix& x) const;
  Matrix decode(const Matrix& z) const;

  friend bool operator==(const AutoEncoder&, const AutoEncoder&) = default;
};

// Fresh network for `input_dim` features: encoder input_dim -> hidden... -> code,
// decoder mirrored, hidden activation from cfg, linear outputs.
AutoEncoder make_autoencoder(std::size_t input_dim, const TrainConfig& cfg);

struct EpochStats {
  double loss = 0.0;
  double reconstruction = 0.0;
  double regularizer = 0.0;  // MMD (WAE) or KL (VAE), unweighted

  friend bool operator==(const EpochStats&, const EpochStats&) = default;
};

struct BatchGradients {
  EpochStats stats;
  MlpGradients encoder_grads;
  MlpGradients decoder_grads;
};

// Loss of one minibatch under model.kind's objective and its gradient with
// respect to every encoder and decoder parameter. `noise_seed` fixes the prior
// sample (WAE) or the reparameterization noise (VAE).
BatchGradients batch_gradients(const AutoEncoder& model, const Matrix& x, const TrainConfig& cfg,
                               std::uint64_t noise_seed);

struct TrainResult {
  AutoEncoder model;
  std::vector<EpochStats> trace;  // one entry per completed epoch
  // Deterministic reconstruction cost (encode -> decode) over the training rows.
  double initial_reconstruction = 0.0;
  double final_reconstruction = 0.0;
};

// Minibatch Adam on the rows of `data`. Each epoch reshuffles; a trailing batch
// with fewer than 2 rows is skipped. WAE batches draw a fresh prior sample; VAE
// batches draw fresh reparameterization noise. Throws NumericalError on a
// non-finite loss.
TrainResult train(const Matrix& data, const TrainConfig& cfg);

// Trains on the normal-class rows of `ds` only.
TrainResult train(const Dataset& ds, const TrainConfig& cfg);

// Checkpoint: "autoencoder <wae|vae> <latent_dim>" then the encoder and decoder
// in the write_mlp layout.
void save_checkpoint(const std::filesystem::path& path, const AutoEncoder& model);
AutoEncoder load_checkpoint(const std::filesystem::path& path);
void write_autoencoder(std::ostream& os, const AutoEncoder& model);
AutoEncoder read_autoencoder(std::istream& is);

}  // namespace phom
