#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "phom/matrix.hpp"

namespace phom {

enum class Activation { kLinear, kTanh, kRelu };

std::string_view to_string(Activation a);
Activation parse_activation(std::string_view text);

// Affine map followed by an elementwise activation: y = act(x W^T + b).
struct DenseLayer {
  Matrix weight;  // out x in
  std::vector<double> bias;
  Activation activation = Activation::kLinear;

  std::size_t in() const { return weight.cols(); }
  std::size_t out() const { return weight.rows(); }

  friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

// Multilayer perceptron. Every instance carries a version stamp that changes on
// construction, copy and mutable access, so tapes recorded against an older
// state are rejected by backward().
class Mlp {
 public:
  Mlp() : version_(next_version()) {}
  explicit Mlp(std::vector<DenseLayer> layers);
  Mlp(const Mlp& other) : layers_(other.layers_), version_(next_version()) {}
  Mlp& operator=(const Mlp& other);
  Mlp(Mlp&&) noexcept = default;
  Mlp& operator=(Mlp&&) noexcept = default;

  // widths = {in, hidden..., out}. Weights uniform in +-sqrt(6 / (fan_in + fan_out)),
  // biases zero.
  static Mlp glorot(std::span<const std::size_t> widths, Activation hidden, Activation output,
                    std::uint64_t seed);

  std::size_t depth() const { return layers_.size(); }
  std::size_t input_width() const { return layers_.front().in(); }
  std::size_t output_width() const { return layers_.back().out(); }
  std::size_t parameter_count() const;

  const std::vector<DenseLayer>& layers() const { return layers_; }
  const DenseLayer& layer(std::size_t i) const { return layers_[i]; }
  DenseLayer& mutable_layer(std::size_t i) {
    version_ = next_version();
    return layers_[i];
  }

  std::uint64_t version() const { return version_; }

  friend bool operator==(const Mlp& a, const Mlp& b) { return a.layers_ == b.layers_; }

 private:
  static std::uint64_t next_version();

  std::vector<DenseLayer> layers_;
  std::uint64_t version_;
};

// Forward intermediates: the input of every layer and the final output.
struct Tape {
  std::uint64_t params_version = 0;
  std::vector<Matrix> inputs;       // inputs[l] feeds layer l
  std::vector<Matrix> activations;  // activations[l] = output of layer l
};

struct ForwardResult {
  Matrix output;
  Tape tape;
};

// Shape mismatch -> InputError.
ForwardResult forward(const Mlp& params, const Matrix& x);

// Output only, no tape.
Matrix predict(const Mlp& params, const Matrix& x);

struct MlpGradients {
  std::vector<Matrix> weight;
  std::vector<std::vector<double>> bias;
  Matrix input;  // d loss / d x
};

// Reverse-mode pass for d loss / d output = `output_grad`. Throws UsageError if
// the tape was recorded for a different parameter state.
MlpGradients backward(const Mlp& params, const Tape& tape, const Matrix& output_grad);

struct AdamConfig {
  double lr = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  friend bool operator==(const AdamConfig&, const AdamConfig&) = default;
};

struct AdamState {
  AdamConfig config;
  std::vector<Matrix> m_weight, v_weight;
  std::vector<std::vector<double>> m_bias, v_bias;
  std::uint64_t step = 0;

  static AdamState zeros_like(const Mlp& params, AdamConfig config = {});
};

// Bias-corrected Adam update in place.
void adam_step(Mlp& params, const MlpGradients& grads, AdamState& state);

struct Reparameterized {
  Matrix z;
  Matrix noise;  // the standard-normal draws used
};

// z = mean + exp(log_var / 2) * eps with eps ~ N(0, I) drawn from `seed`.
Reparameterized reparameterize(const Matrix& mean, const Matrix& log_var, std::uint64_t seed);

// Chain rule through reparameterize(): returns {d/d mean, d/d log_var}.
std::pair<Matrix, Matrix> reparameterize_backward(const Matrix& z_grad, const Matrix& log_var,
                                                  const Matrix& noise);

// Text checkpoint, exact round trip (values written with 17 significant digits):
//   mlp <n_layers>
//   layer <out> <in> <activation>
//   <out lines of `in` weights, row-major>
//   <one line of `out` biases>
void write_mlp(std::ostream& os, const Mlp& params);
Mlp read_mlp(std::istream& is);

}  // namespace phom
