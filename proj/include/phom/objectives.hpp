#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "phom/matrix.hpp"
#include "phom/neural.hpp"

namespace phom {

enum class KernelFamily {
  kInverseMultiquadratic,  // C / (C + |x - y|^2)
  kGaussian,               // exp(-|x - y|^2 / (2 sigma^2)), scale = sigma^2
  kLinear,                 // x . y (test fixture only)
};

std::string_view to_string(KernelFamily f);
KernelFamily parse_kernel_family(std::string_view text);

struct KernelConfig {
  KernelFamily family = KernelFamily::kInverseMultiquadratic;
  double scale = 4.0;  // C for IMQ (2 * latent dim), sigma^2 for Gaussian

  void validate() const;
  double operator()(std::span<const double> x, std::span<const double> y) const;

  friend bool operator==(const KernelConfig&, const KernelConfig&) = default;
};

enum class ModelKind { kWae, kVae };

std::string_view to_string(ModelKind m);
ModelKind parse_model_kind(std::string_view text);

struct TrainConfig {
  ModelKind model = ModelKind::kWae;
  double lambda = 15.0;
  AdamConfig adam{};
  std::size_t batch = 64;
  std::size_t latent_dim = 2;
  std::vector<std::size_t> hidden = {32, 16};  // encoder; the decoder mirrors it
  Activation activation = Activation::kTanh;
  std::size_t epochs = 30;
  // Stop after `patience` consecutive epochs whose loss improves by less than
  // `min_improvement` (relative). patience == 0 disables early stopping.
  std::size_t patience = 5;
  double min_improvement = 1e-3;
  std::uint64_t seed = 1;
  KernelConfig kernel{};

  void validate() const;

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

// Mean over rows of the squared Euclidean distance between x and x_rec.
double reconstruction_cost(const Matrix& x, const Matrix& x_rec);

enum class MmdEstimator { kUnbiased, kBiased };

struct MmdValue {
  double value = 0.0;
  Matrix grad_zq;  // d value / d zq
};

// Squared MMD between the samples zq and zp.
//
// Unbiased: within-set kernel sums skip the diagonal and divide by n(n-1); the
// cross term is 2/(nm) sum k(zq_i, zp_j). Biased keeps the diagonal and
// divides by n^2. Each of the three sums is accumulated in ascending order, so
// swapping the arguments gives a bit-identical result.
double mmd(const Matrix& zq, const Matrix& zp, const KernelConfig& kernel,
           MmdEstimator estimator = MmdEstimator::kUnbiased);
MmdValue mmd_with_grad(const Matrix& zq, const Matrix& zp, const KernelConfig& kernel,
                       MmdEstimator estimator = MmdEstimator::kUnbiased);

// Mean over rows of 0.5 * sum(mean^2 + exp(log_var) - log_var - 1).
double kl_gaussian(const Matrix& mean, const Matrix& log_var);

struct WaeLoss {
  double value = 0.0;
  double reconstruction = 0.0;
  double penalty = 0.0;  // unweighted MMD
  Matrix grad_x_rec;
  Matrix grad_zq;
};

// reconstruction_cost(x, x_rec) + lambda * mmd(zq, zp).
WaeLoss wae_loss(const Matrix& x, const Matrix& x_rec, const Matrix& zq, const Matrix& zp,
                 const TrainConfig& cfg);

struct VaeLoss {
  double value = 0.0;
  double reconstruction = 0.0;
  double kl = 0.0;
  Matrix grad_x_rec;
  Matrix grad_mean;
  Matrix grad_log_var;
};

// reconstruction_cost(x, x_rec) + kl_gaussian(mean, log_var).
VaeLoss vae_loss(const Matrix& x, const Matrix& x_rec, const Matrix& mean, const Matrix& log_var);

// n draws from the standard normal prior on R^latent_dim.
Matrix sample_prior(std::size_t n, std::size_t latent_dim, std::uint64_t seed);

}  // namespace phom
