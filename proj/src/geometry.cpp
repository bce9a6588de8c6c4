#include "phom/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "phom/random.hpp"

namespace phom {

PointCloud::PointCloud(Matrix points) : points_(std::move(points)) {
  if (points_.rows() == 0 || points_.cols() == 0)
    throw InputError("point cloud must contain at least one point of dimension >= 1");
  for (std::size_t i = 0; i < points_.rows(); ++i)
    for (std::size_t j = 0; j < points_.cols(); ++j)
      if (!std::isfinite(points_(i, j)))
        throw InputError("point cloud has non-finite coordinate at row " + std::to_string(i) +
                         ", column " + std::to_string(j));
}

DistanceMatrix::DistanceMatrix(Matrix values) : values_(std::move(values)) {
  const std::size_t n = values_.rows();
  if (n == 0 || values_.cols() != n) throw InputError("distance matrix must be square and non-empty");
  for (std::size_t i = 0; i < n; ++i) {
    if (values_(i, i) != 0.0)
      throw InputError("distance matrix has non-zero diagonal at " + std::to_string(i));
    for (std::size_t j = i + 1; j < n; ++j) {
      const double a = values_(i, j);
      if (!std::isfinite(a) || a < 0.0)
        throw InputError("distance matrix entry (" + std::to_string(i) + "," + std::to_string(j) +
                         ") is negative or non-finite");
      if (a != values_(j, i))
        throw InputError("distance matrix is not symmetric at (" + std::to_string(i) + "," +
                         std::to_string(j) + ")");
    }
  }
}

double DistanceMatrix::max_distance() const {
  double best = 0.0;
  for (double v : values_.values()) best = std::max(best, v);
  return best;
}

DistanceMatrix DistanceMatrix::scaled(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor)) throw InputError("scale factor must be positive");
  Matrix out = values_;
  for (double& v : out.values()) v *= factor;
  return DistanceMatrix(std::move(out));
}

DistanceMatrix distance_matrix(const PointCloud& cloud) {
  const std::size_t n = cloud.size();
  Matrix d(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    auto a = cloud.point(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      auto b = cloud.point(j);
      double sum = 0.0;
      for (std::size_t c = 0; c < a.size(); ++c) {
        const double diff = a[c] - b[c];
        sum += diff * diff;
      }
      d(i, j) = d(j, i) = std::sqrt(sum);
    }
  }
  return DistanceMatrix(std::move(d));
}

std::vector<std::size_t> subsample_indices(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k == 0 || k > n)
    throw InputError("subsample size " + std::to_string(k) + " must be in [1, " + std::to_string(n) + "]");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(perm[i], perm[j]);
  }
  perm.resize(k);
  return perm;
}

PointCloud subsample(const PointCloud& cloud, std::size_t k, std::uint64_t seed) {
  const auto idx = subsample_indices(cloud.size(), k, seed);
  return PointCloud(take_rows(cloud.points(), idx));
}

}  // namespace phom
