#include "phom/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "phom/random.hpp"

namespace phom {
namespace {

void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
  if (!a.same_shape(b))
    throw InputError(std::string(what) + ": shape mismatch (" + std::to_string(a.rows()) + "x" +
                     std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                     std::to_string(b.cols()) + ")");
}

double squared_distance(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return s;
}

double sorted_sum(std::vector<double>& terms) {
  std::sort(terms.begin(), terms.end());
  double s = 0.0;
  for (double t : terms) s += t;
  return s;
}

// Adds coeff * d k(x, y) / dx to `out`.
void add_kernel_grad(const KernelConfig& k, std::span<const double> x, std::span<const double> y,
                     double coeff, std::span<double> out) {
  switch (k.family) {
    case KernelFamily::kInverseMultiquadratic: {
      const double denom = k.scale + squared_distance(x, y);
      const double factor = -2.0 * k.scale / (denom * denom) * coeff;
      for (std::size_t i = 0; i < x.size(); ++i) out[i] += factor * (x[i] - y[i]);
      break;
    }
    case KernelFamily::kGaussian: {
      const double factor = -k(x, y) / k.scale * coeff;
      for (std::size_t i = 0; i < x.size(); ++i) out[i] += factor * (x[i] - y[i]);
      break;
    }
    case KernelFamily::kLinear:
      for (std::size_t i = 0; i < x.size(); ++i) out[i] += coeff * y[i];
      break;
  }
}

void check_mmd_inputs(const Matrix& zq, const Matrix& zp) {
  if (zq.rows() < 2 || zp.rows() < 2) throw InputError("mmd: each sample needs at least 2 rows");
  if (zq.cols() != zp.cols()) throw InputError("mmd: samples have different widths");
}

}  // namespace

std::string_view to_string(KernelFamily f) {
  switch (f) {
    case KernelFamily::kInverseMultiquadratic: return "imq";
    case KernelFamily::kGaussian: return "gaussian";
    case KernelFamily::kLinear: return "linear";
  }
  return "imq";
}

KernelFamily parse_kernel_family(std::string_view text) {
  if (text == "imq") return KernelFamily::kInverseMultiquadratic;
  if (text == "gaussian") return KernelFamily::kGaussian;
  if (text == "linear") return KernelFamily::kLinear;
  throw InputError("unknown kernel '" + std::string(text) + "' (expected imq, gaussian or linear)");
}

void KernelConfig::validate() const {
  if (family != KernelFamily::kLinear && !(scale > 0.0 && std::isfinite(scale)))
    throw InputError("kernel scale must be positive");
}

double KernelConfig::operator()(std::span<const double> x, std::span<const double> y) const {
  switch (family) {
    case KernelFamily::kInverseMultiquadratic: return scale / (scale + squared_distance(x, y));
    case KernelFamily::kGaussian: return std::exp(-squared_distance(x, y) / (2.0 * scale));
    case KernelFamily::kLinear: {
      double s = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
      return s;
    }
  }
  return 0.0;
}

std::string_view to_string(ModelKind m) { return m == ModelKind::kWae ? "wae" : "vae"; }

ModelKind parse_model_kind(std::string_view text) {
  if (text == "wae") return ModelKind::kWae;
  if (text == "vae") return ModelKind::kVae;
  throw InputError("unknown model '" + std::string(text) + "' (expected wae or vae)");
}

void TrainConfig::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InputError("lambda must be >= 0");
  if (batch < 2) throw InputError("batch size must be >= 2");
  if (latent_dim < 1) throw InputError("latent dimension must be >= 1");
  if (!(adam.lr >= 0.0) || !(adam.beta1 >= 0.0 && adam.beta1 < 1.0) ||
      !(adam.beta2 >= 0.0 && adam.beta2 < 1.0) || !(adam.eps > 0.0))
    throw InputError("invalid Adam hyperparameters");
  for (auto h : hidden)
    if (h == 0) throw InputError("hidden layer widths must be positive");
  kernel.validate();
}

double reconstruction_cost(const Matrix& x, const Matrix& x_rec) {
  require_same_shape(x, x_rec, "reconstruction_cost");
  if (x.rows() == 0) throw InputError("reconstruction_cost: empty batch");
  double total = 0.0;
  for (std::size_t r = 0; r < x.rows(); ++r) total += squared_distance(x.row(r), x_rec.row(r));
  return total / static_cast<double>(x.rows());
}

double mmd(const Matrix& zq, const Matrix& zp, const KernelConfig& kernel, MmdEstimator estimator) {
  check_mmd_inputs(zq, zp);
  kernel.validate();
  const bool unbiased = estimator == MmdEstimator::kUnbiased;
  auto within = [&](const Matrix& z) {
    std::vector<double> terms;
    const std::size_t n = z.rows();
    terms.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j || !unbiased) terms.push_back(kernel(z.row(i), z.row(j)));
    const double nn = static_cast<double>(n);
    return sorted_sum(terms) / (unbiased ? nn * (nn - 1.0) : nn * nn);
  };
  std::vector<double> cross;
  cross.reserve(zq.rows() * zp.rows());
  for (std::size_t i = 0; i < zq.rows(); ++i)
    for (std::size_t j = 0; j < zp.rows(); ++j) cross.push_back(kernel(zq.row(i), zp.row(j)));
  const double nm = static_cast<double>(zq.rows()) * static_cast<double>(zp.rows());
  return within(zq) + within(zp) - 2.0 * sorted_sum(cross) / nm;
}

MmdValue mmd_with_grad(const Matrix& zq, const Matrix& zp, const KernelConfig& kernel,
                       MmdEstimator estimator) {
  MmdValue out;
  out.value = mmd(zq, zp, kernel, estimator);
  const bool unbiased = estimator == MmdEstimator::kUnbiased;
  const double n = static_cast<double>(zq.rows());
  const double m = static_cast<double>(zp.rows());
  // zq_a appears in both slots of the symmetric within sum, hence the factor 2
  // (also right for the biased diagonal term k(zq_a, zq_a)).
  const double within_coeff = 2.0 / (unbiased ? n * (n - 1.0) : n * n);
  const double cross_coeff = -2.0 / (n * m);
  out.grad_zq = Matrix(zq.rows(), zq.cols());
  for (std::size_t a = 0; a < zq.rows(); ++a) {
    auto g = out.grad_zq.row(a);
    for (std::size_t j = 0; j < zq.rows(); ++j) {
      if (j == a && unbiased) continue;
      add_kernel_grad(kernel, zq.row(a), zq.row(j), within_coeff, g);
    }
    for (std::size_t j = 0; j < zp.rows(); ++j) add_kernel_grad(kernel, zq.row(a), zp.row(j), cross_coeff, g);
  }
  return out;
}

double kl_gaussian(const Matrix& mean, const Matrix& log_var) {
  require_same_shape(mean, log_var, "kl_gaussian");
  if (mean.rows() == 0) throw InputError("kl_gaussian: empty batch");
  double total = 0.0;
  for (std::size_t r = 0; r < mean.rows(); ++r)
    for (std::size_t c = 0; c < mean.cols(); ++c) {
      const double mu = mean(r, c), lv = log_var(r, c);
      total += 0.5 * (mu * mu + std::exp(lv) - lv - 1.0);
    }
  return total / static_cast<double>(mean.rows());
}

namespace {

Matrix reconstruction_grad(const Matrix& x, const Matrix& x_rec) {
  Matrix g(x.rows(), x.cols());
  const double scale = 2.0 / static_cast<double>(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r)
    for (std::size_t c = 0; c < x.cols(); ++c) g(r, c) = scale * (x_rec(r, c) - x(r, c));
  return g;
}

}  // namespace

WaeLoss wae_loss(const Matrix& x, const Matrix& x_rec, const Matrix& zq, const Matrix& zp,
                 const TrainConfig& cfg) {
  WaeLoss out;
  out.reconstruction = reconstruction_cost(x, x_rec);
  out.grad_x_rec = reconstruction_grad(x, x_rec);
  MmdValue penalty = mmd_with_grad(zq, zp, cfg.kernel);
  out.penalty = penalty.value;
  out.value = out.reconstruction + cfg.lambda * out.penalty;
  out.grad_zq = std::move(penalty.grad_zq);
  for (double& g : out.grad_zq.values()) g *= cfg.lambda;
  return out;
}

VaeLoss vae_loss(const Matrix& x, const Matrix& x_rec, const Matrix& mean, const Matrix& log_var) {
  VaeLoss out;
  out.reconstruction = reconstruction_cost(x, x_rec);
  out.kl = kl_gaussian(mean, log_var);
  if (mean.rows() != x.rows()) throw InputError("vae_loss: latent and data batch sizes differ");
  out.value = out.reconstruction + out.kl;
  out.grad_x_rec = reconstruction_grad(x, x_rec);
  const double inv_n = 1.0 / static_cast<double>(mean.rows());
  out.grad_mean = Matrix(mean.rows(), mean.cols());
  out.grad_log_var = Matrix(mean.rows(), mean.cols());
  for (std::size_t r = 0; r < mean.rows(); ++r)
    for (std::size_t c = 0; c < mean.cols(); ++c) {
      out.grad_mean(r, c) = mean(r, c) * inv_n;
      out.grad_log_var(r, c) = 0.5 * (std::exp(log_var(r, c)) - 1.0) * inv_n;
    }
  return out;
}

Matrix sample_prior(std::size_t n, std::size_t latent_dim, std::uint64_t seed) {
  if (n == 0 || latent_dim == 0) throw InputError("sample_prior: n and latent_dim must be >= 1");
  Rng rng(seed);
  Matrix z(n, latent_dim);
  for (double& v : z.values()) v = rng.normal();
  return z;
}

}  // namespace phom
