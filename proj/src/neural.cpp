#include "phom/neural.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "phom/random.hpp"

namespace phom {
namespace {

double activate(Activation a, double x) {
  switch (a) {
    case Activation::kLinear: return x;
    case Activation::kTanh: return std::tanh(x);
    case Activation::kRelu: return x > 0.0 ? x : 0.0;
  }
  return x;
}

// Derivative expressed through the activation output y.
double activate_grad(Activation a, double y) {
  switch (a) {
    case Activation::kLinear: return 1.0;
    case Activation::kTanh: return 1.0 - y * y;
    case Activation::kRelu: return y > 0.0 ? 1.0 : 0.0;
  }
  return 1.0;
}

Matrix layer_forward(const DenseLayer& layer, const Matrix& x) {
  Matrix y(x.rows(), layer.out());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    auto in = x.row(r);
    for (std::size_t o = 0; o < layer.out(); ++o) {
      auto w = layer.weight.row(o);
      double sum = layer.bias[o];
      for (std::size_t i = 0; i < in.size(); ++i) sum += w[i] * in[i];
      y(r, o) = activate(layer.activation, sum);
    }
  }
  return y;
}

std::string format_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, end);
}

double parse_double(const std::string& token) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw InputError("checkpoint: cannot parse number '" + token + "'");
  return v;
}

}  // namespace

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::kLinear: return "linear";
    case Activation::kTanh: return "tanh";
    case Activation::kRelu: return "relu";
  }
  return "linear";
}

Activation parse_activation(std::string_view text) {
  if (text == "linear") return Activation::kLinear;
  if (text == "tanh") return Activation::kTanh;
  if (text == "relu") return Activation::kRelu;
  throw InputError("unknown activation '" + std::string(text) + "'");
}

std::uint64_t Mlp::next_version() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1, std::memory_order_relaxed);
}

Mlp::Mlp(std::vector<DenseLayer> layers) : layers_(std::move(layers)), version_(next_version()) {
  if (layers_.empty()) throw InputError("MLP needs at least one layer");
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const auto& layer = layers_[l];
    if (layer.out() == 0 || layer.in() == 0 || layer.bias.size() != layer.out())
      throw InputError("MLP layer " + std::to_string(l) + " has inconsistent shape");
    if (l > 0 && layers_[l - 1].out() != layer.in())
      throw InputError("MLP layers " + std::to_string(l - 1) + " and " + std::to_string(l) +
                       " do not compose");
  }
}

Mlp& Mlp::operator=(const Mlp& other) {
  if (this != &other) {
    layers_ = other.layers_;
    version_ = next_version();
  }
  return *this;
}

Mlp Mlp::glorot(std::span<const std::size_t> widths, Activation hidden, Activation output,
                std::uint64_t seed) {
  if (widths.size() < 2) throw InputError("MLP widths need at least input and output");
  Rng rng(seed);
  std::vector<DenseLayer> layers;
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    const std::size_t in = widths[l], out = widths[l + 1];
    DenseLayer layer;
    layer.weight = Matrix(out, in);
    layer.bias.assign(out, 0.0);
    layer.activation = l + 2 == widths.size() ? output : hidden;
    const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
    for (double& w : layer.weight.values()) w = rng.uniform(-limit, limit);
    layers.push_back(std::move(layer));
  }
  return Mlp(std::move(layers));
}

std::size_t Mlp::parameter_count() const {
  std::size_t total = 0;
  for (const auto& l : layers_) total += l.weight.size() + l.bias.size();
  return total;
}

ForwardResult forward(const Mlp& params, const Matrix& x) {
  if (x.cols() != params.input_width())
    throw InputError("forward: input has " + std::to_string(x.cols()) + " columns, network expects " +
                     std::to_string(params.input_width()));
  ForwardResult result;
  result.tape.params_version = params.version();
  result.tape.inputs.reserve(params.depth());
  result.tape.activations.reserve(params.depth());
  const Matrix* current = &x;
  for (const auto& layer : params.layers()) {
    result.tape.inputs.push_back(*current);
    result.tape.activations.push_back(layer_forward(layer, *current));
    current = &result.tape.activations.back();
  }
  result.output = result.tape.activations.back();
  return result;
}

Matrix predict(const Mlp& params, const Matrix& x) {
  if (x.cols() != params.input_width())
    throw InputError("predict: input has " + std::to_string(x.cols()) + " columns, network expects " +
                     std::to_string(params.input_width()));
  Matrix current = x;
  for (const auto& layer : params.layers()) current = layer_forward(layer, current);
  return current;
}

MlpGradients backward(const Mlp& params, const Tape& tape, const Matrix& output_grad) {
  if (tape.params_version != params.version() || tape.inputs.size() != params.depth())
    throw UsageError("backward: tape was recorded for a different parameter state");
  if (!output_grad.same_shape(tape.activations.back()))
    throw InputError("backward: output gradient shape does not match the forward output");

  const std::size_t depth = params.depth();
  MlpGradients grads;
  grads.weight.resize(depth);
  grads.bias.resize(depth);

  Matrix upstream = output_grad;
  for (std::size_t l = depth; l-- > 0;) {
    const DenseLayer& layer = params.layer(l);
    const Matrix& in = tape.inputs[l];
    const Matrix& out = tape.activations[l];
    const std::size_t batch = in.rows();

    // delta = upstream * act'(pre), written in place.
    for (std::size_t r = 0; r < batch; ++r)
      for (std::size_t o = 0; o < layer.out(); ++o)
        upstream(r, o) *= activate_grad(layer.activation, out(r, o));

    Matrix& gw = grads.weight[l] = Matrix(layer.out(), layer.in());
    auto& gb = grads.bias[l];
    gb.assign(layer.out(), 0.0);
    Matrix downstream(batch, layer.in());
    for (std::size_t r = 0; r < batch; ++r) {
      auto x = in.row(r);
      auto dx = downstream.row(r);
      for (std::size_t o = 0; o < layer.out(); ++o) {
        const double delta = upstream(r, o);
        if (delta == 0.0) continue;
        gb[o] += delta;
        auto w = layer.weight.row(o);
        auto g = gw.row(o);
        for (std::size_t i = 0; i < x.size(); ++i) {
          g[i] += delta * x[i];
          dx[i] += delta * w[i];
        }
      }
    }
    upstream = std::move(downstream);
  }
  grads.input = std::move(upstream);
  return grads;
}

AdamState AdamState::zeros_like(const Mlp& params, AdamConfig config) {
  AdamState s;
  s.config = config;
  for (const auto& layer : params.layers()) {
    s.m_weight.emplace_back(layer.out(), layer.in());
    s.v_weight.emplace_back(layer.out(), layer.in());
    s.m_bias.emplace_back(layer.out(), 0.0);
    s.v_bias.emplace_back(layer.out(), 0.0);
  }
  return s;
}

void adam_step(Mlp& params, const MlpGradients& grads, AdamState& state) {
  if (grads.weight.size() != params.depth() || state.m_weight.size() != params.depth())
    throw InputError("adam_step: gradient/state depth does not match the network");
  const auto& c = state.config;
  state.step += 1;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(c.beta1, t);
  const double correction2 = 1.0 - std::pow(c.beta2, t);
  auto update = [&](double& p, double g, double& m, double& v) {
    m = c.beta1 * m + (1.0 - c.beta1) * g;
    v = c.beta2 * v + (1.0 - c.beta2) * g * g;
    const double m_hat = m / correction1;
    const double v_hat = v / correction2;
    p -= c.lr * m_hat / (std::sqrt(v_hat) + c.eps);
  };
  for (std::size_t l = 0; l < params.depth(); ++l) {
    DenseLayer& layer = params.mutable_layer(l);
    if (!grads.weight[l].same_shape(layer.weight) || grads.bias[l].size() != layer.bias.size())
      throw InputError("adam_step: gradient shape mismatch at layer " + std::to_string(l));
    auto w = layer.weight.values();
    auto gw = grads.weight[l].values();
    auto mw = state.m_weight[l].values();
    auto vw = state.v_weight[l].values();
    for (std::size_t i = 0; i < w.size(); ++i) update(w[i], gw[i], mw[i], vw[i]);
    for (std::size_t i = 0; i < layer.bias.size(); ++i)
      update(layer.bias[i], grads.bias[l][i], state.m_bias[l][i], state.v_bias[l][i]);
  }
}

Reparameterized reparameterize(const Matrix& mean, const Matrix& log_var, std::uint64_t seed) {
  if (!mean.same_shape(log_var)) throw InputError("reparameterize: mean and log_var shapes differ");
  Rng rng(seed);
  Reparameterized out{Matrix(mean.rows(), mean.cols()), Matrix(mean.rows(), mean.cols())};
  for (std::size_t r = 0; r < mean.rows(); ++r)
    for (std::size_t c = 0; c < mean.cols(); ++c) {
      const double eps = rng.normal();
      out.noise(r, c) = eps;
      out.z(r, c) = mean(r, c) + std::exp(0.5 * log_var(r, c)) * eps;
    }
  return out;
}

std::pair<Matrix, Matrix> reparameterize_backward(const Matrix& z_grad, const Matrix& log_var,
                                                  const Matrix& noise) {
  if (!z_grad.same_shape(log_var) || !z_grad.same_shape(noise))
    throw InputError("reparameterize_backward: shape mismatch");
  Matrix d_mean = z_grad;
  Matrix d_log_var(z_grad.rows(), z_grad.cols());
  for (std::size_t r = 0; r < z_grad.rows(); ++r)
    for (std::size_t c = 0; c < z_grad.cols(); ++c)
      d_log_var(r, c) = z_grad(r, c) * 0.5 * std::exp(0.5 * log_var(r, c)) * noise(r, c);
  return {std::move(d_mean), std::move(d_log_var)};
}

void write_mlp(std::ostream& os, const Mlp& params) {
  os << "mlp " << params.depth() << '\n';
  for (const auto& layer : params.layers()) {
    os << "layer " << layer.out() << ' ' << layer.in() << ' ' << to_string(layer.activation) << '\n';
    for (std::size_t o = 0; o < layer.out(); ++o) {
      auto w = layer.weight.row(o);
      for (std::size_t i = 0; i < w.size(); ++i) os << (i ? " " : "") << format_double(w[i]);
      os << '\n';
    }
    for (std::size_t o = 0; o < layer.out(); ++o) os << (o ? " " : "") << format_double(layer.bias[o]);
    os << '\n';
  }
}

Mlp read_mlp(std::istream& is) {
  auto expect = [&is](const std::string& word) {
    std::string token;
    if (!(is >> token) || token != word)
      throw InputError("checkpoint: expected '" + word + "', found '" + token + "'");
  };
  auto next_number = [&is]() {
    std::string token;
    if (!(is >> token)) throw InputError("checkpoint: unexpected end of data");
    return parse_double(token);
  };
  expect("mlp");
  std::size_t depth = 0;
  if (!(is >> depth) || depth == 0) throw InputError("checkpoint: bad layer count");
  std::vector<DenseLayer> layers;
  for (std::size_t l = 0; l < depth; ++l) {
    expect("layer");
    std::size_t out = 0, in = 0;
    std::string act;
    if (!(is >> out >> in >> act)) throw InputError("checkpoint: bad layer header");
    DenseLayer layer;
    layer.activation = parse_activation(act);
    layer.weight = Matrix(out, in);
    for (double& w : layer.weight.values()) w = next_number();
    layer.bias.resize(out);
    for (double& b : layer.bias) b = next_number();
    layers.push_back(std::move(layer));
  }
  return Mlp(std::move(layers));
}

}  // namespace phom
