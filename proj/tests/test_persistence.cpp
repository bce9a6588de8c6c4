#include <doctest.h>

#include <cmath>

#include "oracles/betti_oracle.hpp"
#include "phom/bottleneck.hpp"
#include "phom/persistence.hpp"
#include "test_support.hpp"

using namespace phom;

TEST_CASE("unit square diagram") {
  const auto dgm = compute_persistence(build_vr(distance_matrix(testing::unit_square()), 2, 2.0));
  const double r2 = std::sqrt(2.0);
  const std::vector<PersistencePair> expected{
      {0, 0.0, 1.0}, {0, 0.0, 1.0}, {0, 0.0, 1.0}, {0, 0.0, kInfinity}, {1, 1.0, r2}};
  CHECK(dgm.pairs == expected);
  CHECK(dgm.threshold == 2.0);
}

TEST_CASE("unit square agrees with the rank oracle") {
  const auto d = distance_matrix(testing::unit_square());
  CHECK(compute_persistence(build_vr(d, 2, 2.0)).pairs == oracle::persistence(d, 2.0, 2));
}

TEST_CASE("single point") {
  const auto dgm = compute_persistence(build_vr(distance_matrix(PointCloud(Matrix::from_rows({{0.5}}))), 2, 1.0));
  REQUIRE(dgm.pairs.size() == 1);
  CHECK(dgm.pairs[0] == PersistencePair{0, 0.0, kInfinity});
}

TEST_CASE("two points at distance 3") {
  const auto dgm = compute_persistence(build_vr(distance_matrix(PointCloud(Matrix::from_rows({{0}, {3}}))), 2, 5.0));
  const std::vector<PersistencePair> expected{{0, 0.0, 3.0}, {0, 0.0, kInfinity}};
  CHECK(dgm.pairs == expected);
}

TEST_CASE("a truncated circle keeps an essential loop") {
  const auto cloud = testing::circle(6);
  const auto d = distance_matrix(cloud);
  // Neighbours sit at distance 1; the threshold stops before any chord.
  const auto dgm = compute_persistence(build_vr(d, 2, 1.2));
  CHECK(dgm.essential_count(0) == 1);
  CHECK(dgm.essential_count(1) == 1);
  CHECK(dgm.pairs == oracle::persistence(d, 1.2, 2));
}

TEST_CASE("a full circle has one finite H1 bar") {
  const auto dgm = compute_persistence(build_vr(distance_matrix(testing::circle(12))));
  CHECK(dgm.count(1) == 1);
  CHECK(dgm.essential_count(1) == 0);
  CHECK(dgm.essential_count(0) == 1);
}

TEST_CASE("max_dim 1 reports H0 only") {
  const auto dgm = compute_persistence(build_vr(distance_matrix(testing::unit_square()), 1));
  CHECK(dgm.count(1) == 0);
  CHECK(dgm.count(0) == 4);
}

TEST_CASE("coincident points produce no zero-length bars") {
  const auto cloud = PointCloud(Matrix::from_rows({{1, 1}, {1, 1}, {1, 1}}));
  const auto dgm = compute_persistence(build_vr(distance_matrix(cloud)));
  const std::vector<PersistencePair> expected{{0, 0.0, kInfinity}};
  CHECK(dgm.pairs == expected);
}

TEST_CASE("rejects a filtration that is not closed under faces") {
  auto f = build_vr(distance_matrix(testing::unit_square()), 2);
  f.simplices.erase(f.simplices.begin());
  CHECK_THROWS_AS(compute_persistence(f), InputError);
}

TEST_CASE("barcodes") {
  SUBCASE("empty diagram") {
    const auto b = barcodes(PersistenceDiagram{});
    CHECK(b.bars.empty());
  }
  SUBCASE("unit square") {
    const auto dgm = compute_persistence(build_vr(distance_matrix(testing::unit_square()), 2, 2.0));
    const auto b = barcodes(dgm);
    CHECK(b.count(0) == 4);
    CHECK(b.count(1) == 1);
    CHECK(b.to_diagram() == dgm);
  }
}

TEST_CASE("persistence properties on random clouds") {
  Rng rng(42);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + rng.below(7);
    const auto cloud = testing::random_cloud(rng, n, 2 + rng.below(2));
    const auto d = distance_matrix(cloud);
    const double threshold = rng.uniform01() < 0.3 ? d.max_distance() * rng.uniform(0.3, 0.9) : d.max_distance();
    const auto dgm = compute_persistence(build_vr(d, 2, threshold));
    const auto expected = oracle::persistence(d, threshold, 2);
    CHECK(dgm.pairs == expected);

    // Barcode round trip.
    CHECK(barcodes(dgm).to_diagram() == dgm);

    // Alternating count of live bars equals beta0 - beta1 at every grid value.
    const auto complex = oracle::make_complex(d, threshold);
    for (double eps : complex.grid) {
      int alive = 0;
      for (const auto& p : dgm.pairs)
        if (p.birth <= eps && eps < p.death) alive += p.dim == 0 ? 1 : -1;
      CHECK(alive == oracle::betti(complex, 0, eps, 2) - oracle::betti(complex, 1, eps, 2));
    }

    if (threshold == d.max_distance()) CHECK(dgm.essential_count(0) == 1);
  }
}

TEST_CASE("stability under small perturbations") {
  Rng rng(77);
  const double delta = 0.01;
  for (int trial = 0; trial < 10; ++trial) {
    const auto cloud = testing::random_cloud(rng, 12, 2);
    Matrix moved = cloud.points();
    for (std::size_t i = 0; i < moved.rows(); ++i) {
      const double a = rng.uniform(0, 6.283185307179586), r = delta * rng.uniform01();
      moved(i, 0) += r * std::cos(a);
      moved(i, 1) += r * std::sin(a);
    }
    const auto d1 = compute_persistence(build_vr(distance_matrix(cloud)));
    const auto d2 = compute_persistence(build_vr(distance_matrix(PointCloud(moved))));
    for (int dim = 0; dim <= 1; ++dim)
      CHECK(bottleneck_distance(d1.restricted(dim), d2.restricted(dim), dim) <= 2 * delta + 1e-9);
  }
}
