#pragma once

// Central finite differences over every parameter of a set of networks.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "phom/neural.hpp"

namespace phom::oracle {

// Pointers to every weight and bias, in layer order. Taking them bumps the
// network version, so record tapes after calling this.
inline std::vector<double*> parameter_slots(Mlp& net) {
  std::vector<double*> out;
  for (std::size_t l = 0; l < net.depth(); ++l) {
    DenseLayer& layer = net.mutable_layer(l);
    for (double& w : layer.weight.values()) out.push_back(&w);
    for (double& b : layer.bias) out.push_back(&b);
  }
  return out;
}

inline std::vector<double> flatten(const MlpGradients& g) {
  std::vector<double> out;
  for (std::size_t l = 0; l < g.weight.size(); ++l) {
    for (double w : g.weight[l].values()) out.push_back(w);
    for (double b : g.bias[l]) out.push_back(b);
  }
  return out;
}

inline std::vector<double> central_differences(const std::vector<double*>& slots,
                                               const std::function<double()>& loss, double h = 1e-5) {
  std::vector<double> out;
  out.reserve(slots.size());
  for (double* p : slots) {
    const double saved = *p;
    *p = saved + h;
    const double up = loss();
    *p = saved - h;
    const double down = loss();
    *p = saved;
    out.push_back((up - down) / (2.0 * h));
  }
  return out;
}

// |a - b| / max(|a|, |b|, floor): relative error that stays finite when both
// sides vanish.
inline double relative_error(double analytic, double numeric, double floor = 1e-8) {
  return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), floor});
}

}  // namespace phom::oracle
