#pragma once

#include <cmath>
#include <numbers>

#include "phom/geometry.hpp"
#include "phom/random.hpp"

namespace phom::testing {

inline PointCloud unit_square() {
  return PointCloud(Matrix::from_rows({{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
}

inline PointCloud random_cloud(Rng& rng, std::size_t n, std::size_t dim, double spread = 1.0) {
  Matrix m(n, dim);
  for (double& v : m.values()) v = rng.uniform(-spread, spread);
  return PointCloud(std::move(m));
}

inline PointCloud circle(std::size_t n, double radius = 1.0) {
  Matrix m(n, 2);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
    m(i, 0) = radius * std::cos(t);
    m(i, 1) = radius * std::sin(t);
  }
  return PointCloud(std::move(m));
}

}  // namespace phom::testing
