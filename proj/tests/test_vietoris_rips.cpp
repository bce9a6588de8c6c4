#include <doctest.h>

#include <cmath>

#include "phom/vietoris_rips.hpp"
#include "test_support.hpp"

using namespace phom;

namespace {

std::size_t count(const Filtration& f, int dim, double value) {
  std::size_t c = 0;
  for (const auto& s : f.simplices)
    if (s.dim() == dim && s.value == value) ++c;
  return c;
}

}  // namespace

TEST_CASE("equilateral triangle") {
  // Distances given directly so every side is exactly 1.
  const DistanceMatrix d(Matrix::from_rows({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}));
  const auto f = build_vr(d, 2, 2.0);
  CHECK(f.simplices.size() == 7);
  CHECK(count(f, 0, 0.0) == 3);
  CHECK(count(f, 1, 1.0) == 3);
  CHECK(count(f, 2, 1.0) == 1);
}

TEST_CASE("single point") {
  const auto f = build_vr(distance_matrix(PointCloud(Matrix::from_rows({{2, 3}}))), 2, 1.0);
  REQUIRE(f.simplices.size() == 1);
  CHECK(f.simplices[0].dim() == 0);
  CHECK(f.simplices[0].value == 0.0);
}

TEST_CASE("unit square corners") {
  const auto f = build_vr(distance_matrix(testing::unit_square()), 2, 2.0);
  CHECK(f.simplices.size() == 14);
  CHECK(count(f, 0, 0.0) == 4);
  CHECK(count(f, 1, 1.0) == 4);
  CHECK(count(f, 1, std::sqrt(2.0)) == 2);
  CHECK(count(f, 2, std::sqrt(2.0)) == 4);
  CHECK_NOTHROW(check_filtration(f));
}

TEST_CASE("ordering: value, then dimension, then vertices") {
  const auto f = build_vr(distance_matrix(testing::unit_square()), 2);
  for (std::size_t i = 1; i < f.simplices.size(); ++i)
    CHECK_FALSE(filtration_less(f.simplices[i], f.simplices[i - 1]));
  // Diagonal edges precede the triangles sharing their value.
  const auto& last_edge = f.simplices[9];
  CHECK(last_edge.dim() == 1);
  CHECK(f.simplices[10].dim() == 2);
}

TEST_CASE("input validation") {
  const auto d = distance_matrix(testing::unit_square());
  CHECK_THROWS_AS(build_vr(d, 3, 1.0), InputError);
  CHECK_THROWS_AS(build_vr(d, 0, 1.0), InputError);
  CHECK_THROWS_AS(build_vr(d, 2, 0.0), InputError);
  CHECK_THROWS_AS(build_vr(d, 2, -1.0), InputError);
  CHECK_THROWS_AS(build_vr(d, 2, NAN), InputError);
}

TEST_CASE("default threshold is the diameter") {
  const auto d = distance_matrix(testing::unit_square());
  const auto f = build_vr(d);
  CHECK(f.threshold == d.max_distance());
  CHECK(f.simplices.size() == 4 + 6 + 4);
}

TEST_CASE("max_dim 1 has no triangles") {
  const auto f = build_vr(distance_matrix(testing::unit_square()), 1);
  for (const auto& s : f.simplices) CHECK(s.dim() <= 1);
  CHECK(f.simplices.size() == 10);
}

TEST_CASE("check_filtration rejects a missing face") {
  auto f = build_vr(distance_matrix(testing::unit_square()), 2);
  f.simplices.erase(f.simplices.begin() + 5);  // drop an edge
  CHECK_THROWS_AS(check_filtration(f), InputError);
}

TEST_CASE("properties on random clouds") {
  Rng rng(21);
  for (int trial = 0; trial < 25; ++trial) {
    const auto cloud = testing::random_cloud(rng, 3 + rng.below(10), 2 + rng.below(2));
    const auto d = distance_matrix(cloud);
    const double t2 = d.max_distance();
    const double t1 = t2 * rng.uniform(0.2, 1.0);
    const auto big = build_vr(d, 2, t2);
    const auto small = build_vr(d, 2, t1);

    CHECK_NOTHROW(check_filtration(big));
    CHECK_NOTHROW(check_filtration(small));

    // Monotonicity: the small complex is exactly the part of the big one with value <= t1.
    std::vector<Simplex> prefix;
    for (const auto& s : big.simplices)
      if (s.value <= t1) prefix.push_back(s);
    CHECK(prefix == small.simplices);

    // Scale equivariance.
    const double s = rng.uniform(0.5, 3.0);
    const auto scaled = build_vr(d.scaled(s), 2, t2 * s);
    REQUIRE(scaled.simplices.size() == big.simplices.size());
    for (std::size_t i = 0; i < big.simplices.size(); ++i) {
      CHECK(scaled.simplices[i].vertices == big.simplices[i].vertices);
      CHECK(scaled.simplices[i].value == doctest::Approx(big.simplices[i].value * s).epsilon(1e-12));
    }
  }
}
