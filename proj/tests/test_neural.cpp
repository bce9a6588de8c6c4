#include <doctest.h>

#include <cmath>
#include <sstream>

#include "oracles/finite_difference.hpp"
#include "phom/neural.hpp"
#include "phom/random.hpp"

using namespace phom;

namespace {

Matrix random_matrix(Rng& rng, std::size_t r, std::size_t c, double spread = 1.0) {
  Matrix m(r, c);
  for (double& v : m.values()) v = rng.uniform(-spread, spread);
  return m;
}

Mlp random_mlp(Rng& rng, std::vector<std::size_t> widths, Activation hidden) {
  Mlp net = Mlp::glorot(widths, hidden, Activation::kLinear, rng.next_u64());
  for (std::size_t l = 0; l < net.depth(); ++l)
    for (double& b : net.mutable_layer(l).bias) b = rng.uniform(-0.5, 0.5);
  return net;
}

// Scalar re-implementation of the forward pass.
Matrix reference_forward(const Mlp& net, const Matrix& x) {
  Matrix cur = x;
  for (const auto& layer : net.layers()) {
    Matrix next(cur.rows(), layer.out());
    for (std::size_t r = 0; r < cur.rows(); ++r)
      for (std::size_t o = 0; o < layer.out(); ++o) {
        double s = layer.bias[o];
        for (std::size_t i = 0; i < layer.in(); ++i) s += layer.weight(o, i) * cur(r, i);
        switch (layer.activation) {
          case Activation::kTanh: s = std::tanh(s); break;
          case Activation::kRelu: s = std::max(0.0, s); break;
          case Activation::kLinear: break;
        }
        next(r, o) = s;
      }
    cur = next;
  }
  return cur;
}

DenseLayer identity_layer(std::size_t n) {
  DenseLayer l;
  l.weight = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) l.weight(i, i) = 1.0;
  l.bias.assign(n, 0.0);
  return l;
}

}  // namespace

TEST_CASE("forward: identity and zero layers") {
  Rng rng(1);
  const Matrix x = random_matrix(rng, 4, 3);
  CHECK(forward(Mlp({identity_layer(3)}), x).output == x);

  DenseLayer zero = identity_layer(3);
  zero.weight = Matrix(3, 3);
  const Matrix y = forward(Mlp({zero}), x).output;
  for (double v : y.values()) CHECK(v == 0.0);
}

TEST_CASE("forward matches a scalar re-implementation") {
  Rng rng(2);
  for (auto act : {Activation::kTanh, Activation::kRelu, Activation::kLinear}) {
    const Mlp net = random_mlp(rng, {4, 5, 3}, act);
    const Matrix x = random_matrix(rng, 6, 4);
    const Matrix y = forward(net, x).output;
    const Matrix ref = reference_forward(net, x);
    for (std::size_t i = 0; i < y.size(); ++i)
      CHECK(y.values()[i] == doctest::Approx(ref.values()[i]).epsilon(1e-14));
    CHECK(predict(net, x) == y);
  }
}

TEST_CASE("forward: shape mismatch") {
  const Mlp net({identity_layer(3)});
  CHECK_THROWS_AS(forward(net, Matrix(2, 4)), InputError);
}

TEST_CASE("layers must compose") {
  DenseLayer a = identity_layer(3), b = identity_layer(2);
  CHECK_THROWS_AS(Mlp({a, b}), InputError);
}

TEST_CASE("backward: linear layer, loss = sum(y)") {
  Rng rng(3);
  DenseLayer l;
  l.weight = random_matrix(rng, 2, 3);
  l.bias = {0.1, -0.2};
  const Mlp net({l});
  const Matrix x = random_matrix(rng, 5, 3);
  auto fwd = forward(net, x);
  const auto g = backward(net, fwd.tape, Matrix(5, 2, 1.0));
  for (std::size_t o = 0; o < 2; ++o) {
    for (std::size_t i = 0; i < 3; ++i) {
      double col_sum = 0.0;
      for (std::size_t r = 0; r < 5; ++r) col_sum += x(r, i);
      CHECK(g.weight[0](o, i) == doctest::Approx(col_sum).epsilon(1e-14));
    }
    CHECK(g.bias[0][o] == doctest::Approx(5.0));
  }
}

TEST_CASE("backward: zero input") {
  Rng rng(4);
  DenseLayer l;
  l.weight = random_matrix(rng, 2, 3);
  l.bias = {0.0, 0.0};
  const Mlp net({l});
  auto fwd = forward(net, Matrix(3, 3));
  const Matrix upstream = random_matrix(rng, 3, 2);
  const auto g = backward(net, fwd.tape, upstream);
  for (double w : g.weight[0].values()) CHECK(w == 0.0);
  for (std::size_t o = 0; o < 2; ++o)
    CHECK(g.bias[0][o] == doctest::Approx(upstream(0, o) + upstream(1, o) + upstream(2, o)));
}

TEST_CASE("backward: stale tape") {
  Rng rng(5);
  Mlp net = random_mlp(rng, {2, 3, 1}, Activation::kTanh);
  auto fwd = forward(net, random_matrix(rng, 2, 2));
  net.mutable_layer(0).bias[0] += 1.0;
  CHECK_THROWS_AS(backward(net, fwd.tape, Matrix(2, 1, 1.0)), UsageError);
  Mlp copy = net;
  auto fwd2 = forward(net, random_matrix(rng, 2, 2));
  CHECK_THROWS_AS(backward(copy, fwd2.tape, Matrix(2, 1, 1.0)), UsageError);
}

TEST_CASE("backward matches central finite differences") {
  Rng rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t in = 1 + rng.below(4), hid = 1 + rng.below(5), out = 1 + rng.below(3);
    const auto act = trial % 2 ? Activation::kTanh : Activation::kLinear;
    Mlp net = random_mlp(rng, {in, hid, out}, act);
    const Matrix x = random_matrix(rng, 3, in);
    const Matrix target = random_matrix(rng, 3, out);
    auto loss = [&] {
      const Matrix y = predict(net, x);
      double s = 0.0;
      for (std::size_t i = 0; i < y.size(); ++i) s += 0.5 * std::pow(y.values()[i] - target.values()[i], 2);
      return s;
    };
    auto slots = oracle::parameter_slots(net);
    auto fwd = forward(net, x);
    Matrix upstream = fwd.output;
    for (std::size_t i = 0; i < upstream.size(); ++i) upstream.values()[i] -= target.values()[i];
    const auto analytic = oracle::flatten(backward(net, fwd.tape, upstream));
    const auto numeric = oracle::central_differences(slots, loss);
    REQUIRE(analytic.size() == numeric.size());
    for (std::size_t i = 0; i < analytic.size(); ++i)
      CHECK(oracle::relative_error(analytic[i], numeric[i]) <= 1e-4);
  }
}

TEST_CASE("adam: zero gradient leaves params unchanged") {
  Rng rng(7);
  Mlp net = random_mlp(rng, {3, 2}, Activation::kLinear);
  const Mlp before = net;
  auto state = AdamState::zeros_like(net);
  auto fwd = forward(net, random_matrix(rng, 2, 3));
  auto g = backward(net, fwd.tape, Matrix(2, 2));
  adam_step(net, g, state);
  CHECK(net == before);
  CHECK(state.step == 1);
}

TEST_CASE("adam: first step moves each parameter by about lr") {
  DenseLayer l;
  l.weight = Matrix::from_rows({{0.5}});
  l.bias = {0.0};
  Mlp net({l});
  auto state = AdamState::zeros_like(net);
  MlpGradients g{{Matrix::from_rows({{-3.7}})}, {{0.25}}, {}};
  adam_step(net, g, state);
  const double lr = 0.001, eps = 1e-8;
  CHECK(net.layer(0).weight(0, 0) == doctest::Approx(0.5 + lr * 3.7 / (3.7 + eps)).epsilon(1e-12));
  CHECK(net.layer(0).bias[0] == doctest::Approx(-lr * 0.25 / (0.25 + eps)).epsilon(1e-12));
}

TEST_CASE("adam: two steps with constant gradient follow the recurrence") {
  DenseLayer l;
  l.weight = Matrix::from_rows({{1.0}});
  l.bias = {0.0};
  Mlp net({l});
  auto state = AdamState::zeros_like(net);
  const double g = 0.3, b1 = 0.9, b2 = 0.999, lr = 0.001, eps = 1e-8;
  MlpGradients grads{{Matrix::from_rows({{g}})}, {{0.0}}, {}};
  adam_step(net, grads, state);
  adam_step(net, grads, state);
  double p = 1.0, m = 0.0, v = 0.0;
  for (int t = 1; t <= 2; ++t) {
    m = b1 * m + (1 - b1) * g;
    v = b2 * v + (1 - b2) * g * g;
    p -= lr * (m / (1 - std::pow(b1, t))) / (std::sqrt(v / (1 - std::pow(b2, t))) + eps);
  }
  CHECK(net.layer(0).weight(0, 0) == doctest::Approx(p).epsilon(1e-14));
  CHECK(state.m_weight[0](0, 0) == doctest::Approx(m).epsilon(1e-14));
  CHECK(state.v_weight[0](0, 0) == doctest::Approx(v).epsilon(1e-14));
}

TEST_CASE("adam: lr = 0 is the identity") {
  Rng rng(8);
  Mlp net = random_mlp(rng, {3, 4, 2}, Activation::kTanh);
  const Mlp before = net;
  auto state = AdamState::zeros_like(net, {0.0, 0.9, 0.999, 1e-8});
  auto fwd = forward(net, random_matrix(rng, 3, 3));
  auto g = backward(net, fwd.tape, random_matrix(rng, 3, 2));
  adam_step(net, g, state);
  CHECK(net == before);
}

TEST_CASE("reparameterize") {
  Rng rng(9);
  const Matrix mean = random_matrix(rng, 4, 2);
  SUBCASE("vanishing variance returns the mean") {
    const auto r = reparameterize(mean, Matrix(4, 2, -50.0), 1);
    for (std::size_t i = 0; i < mean.size(); ++i) CHECK(std::abs(r.z.values()[i] - mean.values()[i]) <= 1e-9);
  }
  SUBCASE("deterministic per seed") {
    CHECK(reparameterize(mean, Matrix(4, 2), 3).z == reparameterize(mean, Matrix(4, 2), 3).z);
    CHECK(reparameterize(mean, Matrix(4, 2), 3).z != reparameterize(mean, Matrix(4, 2), 4).z);
  }
  SUBCASE("unit variance") {
    const std::size_t n = 20000;
    const auto r = reparameterize(Matrix(n, 2), Matrix(n, 2), 5);
    for (std::size_t c = 0; c < 2; ++c) {
      double s = 0, s2 = 0;
      for (std::size_t i = 0; i < n; ++i) {
        s += r.z(i, c);
        s2 += r.z(i, c) * r.z(i, c);
      }
      const double var = s2 / n - (s / n) * (s / n);
      CHECK(std::abs(var - 1.0) <= 0.1);
    }
  }
  SUBCASE("gradient through mean and log_var") {
    const Matrix log_var = random_matrix(rng, 4, 2);
    const auto r = reparameterize(mean, log_var, 6);
    const Matrix upstream = random_matrix(rng, 4, 2);
    auto [dm, dlv] = reparameterize_backward(upstream, log_var, r.noise);
    CHECK(dm == upstream);
    const double h = 1e-6;
    for (std::size_t i = 0; i < log_var.size(); ++i) {
      Matrix up = log_var, down = log_var;
      up.values()[i] += h;
      down.values()[i] -= h;
      const double zu = reparameterize(mean, up, 6).z.values()[i];
      const double zd = reparameterize(mean, down, 6).z.values()[i];
      CHECK(dlv.values()[i] == doctest::Approx(upstream.values()[i] * (zu - zd) / (2 * h)).epsilon(1e-6));
    }
  }
}

TEST_CASE("checkpoint round trip is exact") {
  Rng rng(10);
  for (auto act : {Activation::kTanh, Activation::kRelu}) {
    Mlp net = random_mlp(rng, {29, 32, 16, 2}, act);
    std::stringstream ss;
    write_mlp(ss, net);
    const Mlp back = read_mlp(ss);
    CHECK(back == net);
  }
  std::stringstream bad("mlp 1\nlayer 2 2 tanh\n1 2 3\n");
  CHECK_THROWS_AS(read_mlp(bad), InputError);
}
