#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "phom/geometry.hpp"
#include "test_support.hpp"

using namespace phom;

TEST_CASE("distance_matrix: 3-4-5 triangle") {
  const auto d = distance_matrix(PointCloud(Matrix::from_rows({{0, 0}, {3, 4}})));
  CHECK(d(0, 1) == 5.0);
  CHECK(d(1, 0) == 5.0);
  CHECK(d(0, 0) == 0.0);
}

TEST_CASE("distance_matrix: single point is a 1x1 zero matrix") {
  const auto d = distance_matrix(PointCloud(Matrix::from_rows({{1, 1}})));
  CHECK(d.size() == 1);
  CHECK(d(0, 0) == 0.0);
  CHECK(d.max_distance() == 0.0);
}

TEST_CASE("distance_matrix matches an element-wise scalar loop") {
  Rng rng(3);
  const auto cloud = testing::random_cloud(rng, 3, 2);
  const auto d = distance_matrix(cloud);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      const double dx = cloud.points()(i, 0) - cloud.points()(j, 0);
      const double dy = cloud.points()(i, 1) - cloud.points()(j, 1);
      CHECK(d(i, j) == doctest::Approx(std::hypot(dx, dy)).epsilon(1e-15));
    }
}

TEST_CASE("point clouds reject non-finite coordinates and emptiness") {
  CHECK_THROWS_AS(PointCloud(Matrix::from_rows({{0, NAN}})), InputError);
  CHECK_THROWS_AS(PointCloud(Matrix::from_rows({{INFINITY, 0}})), InputError);
  CHECK_THROWS_AS(PointCloud(Matrix(0, 2)), InputError);
}

TEST_CASE("distance matrices validate symmetry") {
  CHECK_THROWS_AS(DistanceMatrix(Matrix::from_rows({{0, 1}, {2, 0}})), InputError);
  CHECK_THROWS_AS(DistanceMatrix(Matrix::from_rows({{1, 1}, {1, 0}})), InputError);
  CHECK_THROWS_AS(DistanceMatrix(Matrix::from_rows({{0, -1}, {-1, 0}})), InputError);
}

TEST_CASE("distance matrix properties on random clouds") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + rng.below(10), dim = 1 + rng.below(4);
    const auto cloud = testing::random_cloud(rng, n, dim, 3.0);
    const auto d = distance_matrix(cloud);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) CHECK(d(i, k) <= d(i, j) + d(j, k) + 1e-9);

    // Rigid motion: random rotation in the first two coordinates plus a shift.
    Matrix moved = cloud.points();
    const double angle = rng.uniform(0, 6.28);
    for (std::size_t i = 0; i < n; ++i) {
      auto p = moved.row(i);
      if (dim >= 2) {
        const double x = p[0], y = p[1];
        p[0] = std::cos(angle) * x - std::sin(angle) * y;
        p[1] = std::sin(angle) * x + std::cos(angle) * y;
      }
      for (auto& c : p) c += 5.0;
    }
    const auto d2 = distance_matrix(PointCloud(moved));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) CHECK(std::abs(d(i, j) - d2(i, j)) <= 1e-9);
  }
}

TEST_CASE("subsample: full sample is a permutation") {
  Rng rng(5);
  const auto cloud = testing::random_cloud(rng, 5, 2);
  for (std::uint64_t seed : {1u, 2u, 99u}) {
    const auto s = subsample(cloud, 5, seed);
    std::vector<std::vector<double>> a, b;
    for (std::size_t i = 0; i < 5; ++i) {
      a.emplace_back(cloud.point(i).begin(), cloud.point(i).end());
      b.emplace_back(s.point(i).begin(), s.point(i).end());
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
  }
}

TEST_CASE("subsample: deterministic per seed, distinct rows") {
  const auto a = subsample_indices(100, 50, 7);
  const auto b = subsample_indices(100, 50, 7);
  CHECK(a == b);
  auto sorted = a;
  std::sort(sorted.begin(), sorted.end());
  CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
  CHECK(subsample_indices(100, 50, 8) != a);
}

TEST_CASE("subsample: uniform inclusion frequency over 1000 seeds") {
  std::vector<int> hits(100, 0);
  for (std::uint64_t seed = 1; seed <= 1000; ++seed)
    for (auto i : subsample_indices(100, 50, seed)) ++hits[i];
  for (int h : hits) CHECK(std::abs(h / 1000.0 - 0.5) <= 0.05);
}

TEST_CASE("subsample: k out of range") {
  CHECK_THROWS_AS(subsample_indices(5, 6, 1), InputError);
  CHECK_THROWS_AS(subsample_indices(5, 0, 1), InputError);
}
