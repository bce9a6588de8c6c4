#pragma once

#include <cstdint>
#include <vector>

#include "phom/bottleneck.hpp"
#include "phom/geometry.hpp"
#include "phom/training.hpp"

namespace phom {

// Row-aligned samples of the three manifolds: row i of `latent` is the code of
// row i of `original`, and row i of `reconstructed` its decoding.
struct Manifolds {
  std::vector<std::size_t> rows;  // indices into the source matrix
  PointCloud original;
  PointCloud latent;
  PointCloud reconstructed;
};

// Draws k rows of `data` (seeded, without replacement) and maps them through
// the encoder (posterior mean for a VAE) and decoder.
Manifolds extract_manifolds(const Matrix& data, const AutoEncoder& model, std::size_t k,
                            std::uint64_t seed);

struct CompareConfig {
  int max_dim = 2;  // triangles are needed for H1
  Aggregation aggregation = Aggregation::kMax;
};

struct ManifoldComparison {
  CombinedBottleneck distance;
  PersistenceDiagram first;
  PersistenceDiagram second;
  double threshold = 0.0;

  friend bool operator==(const ManifoldComparison&, const ManifoldComparison&) = default;
};

// Rips filtrations of both clouds at a shared threshold (the larger of the two
// diameters), their diagrams, and the aggregated bottleneck distance.
ManifoldComparison compare_manifolds(const PointCloud& a, const PointCloud& b,
                                     const CompareConfig& cfg = {});

struct ScatterConfig {
  std::size_t rounds = 10;
  double fraction = 0.5;  // of the points of Z per bootstrap draw
  std::uint64_t seed = 1;
  Aggregation aggregation = Aggregation::kMax;
  int max_dim = 2;
  bool allow_full_sample = false;  // permits fraction == 1 (tests only)
};

struct ScatterResult {
  double mean = 0.0;  // the score
  double max = 0.0;
  std::size_t rounds = 0;
  std::size_t subsample_size = 0;
  double threshold = 0.0;
  std::vector<double> pairwise;  // (0,1), (0,2), ..., (r-2, r-1)

  friend bool operator==(const ScatterResult&, const ScatterResult&) = default;
};

// Seed of bootstrap draw `round`.
std::uint64_t scatter_round_seed(std::uint64_t seed, std::size_t round);

// Bootstrap scatter statistic of a latent sample: `rounds` subsamples of size
// ceil(fraction * n), one diagram each (shared threshold = diameter of Z), and
// the mean (and max) combined bottleneck distance over all pairs of draws.
// Large values indicate a chaotically scattered latent distribution.
ScatterResult scatter_score(const PointCloud& z, const ScatterConfig& cfg);

// Diagram of a single cloud with the default threshold.
PersistenceDiagram cloud_diagram(const PointCloud& cloud, int max_dim = 2);

}  // namespace phom
