#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "phom/matrix.hpp"

namespace phom {

// n points in R^d, one per row. Always non-empty and finite.
class PointCloud {
 public:
  // Throws InputError when empty or when any coordinate is NaN/Inf.
  explicit PointCloud(Matrix points);

  std::size_t size() const { return points_.rows(); }
  std::size_t dim() const { return points_.cols(); }
  const Matrix& points() const { return points_; }
  std::span<const double> point(std::size_t i) const { return points_.row(i); }

  friend bool operator==(const PointCloud&, const PointCloud&) = default;

 private:
  Matrix points_;
};

// Symmetric, zero-diagonal, non-negative n x n matrix of pairwise distances.
class DistanceMatrix {
 public:
  // Validates symmetry, zero diagonal and finiteness; throws InputError.
  explicit DistanceMatrix(Matrix values);

  std::size_t size() const { return values_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return values_(i, j); }
  const Matrix& values() const { return values_; }

  // Largest pairwise distance (0 for a single point).
  double max_distance() const;

  // Every entry multiplied by `factor` (> 0).
  DistanceMatrix scaled(double factor) const;

 private:
  Matrix values_;
};

// Euclidean distances between all pairs of points.
DistanceMatrix distance_matrix(const PointCloud& cloud);

// k distinct row indices out of n, uniformly without replacement (partial
// Fisher-Yates on Rng). Deterministic for a fixed seed. Throws when k > n or k == 0.
std::vector<std::size_t> subsample_indices(std::size_t n, std::size_t k, std::uint64_t seed);

PointCloud subsample(const PointCloud& cloud, std::size_t k, std::uint64_t seed);

}  // namespace phom
