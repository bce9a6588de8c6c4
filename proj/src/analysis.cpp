#include "phom/analysis.hpp"

#include <cmath>
#include <future>

#include "phom/random.hpp"

namespace phom {
namespace {

PersistenceDiagram diagram_at(const PointCloud& cloud, int max_dim, double threshold) {
  const DistanceMatrix d = distance_matrix(cloud);
  return compute_persistence(threshold > 0.0 ? build_vr(d, max_dim, threshold) : build_vr(d, max_dim));
}

}  // namespace

Manifolds extract_manifolds(const Matrix& data, const AutoEncoder& model, std::size_t k,
                            std::uint64_t seed) {
  auto rows = subsample_indices(data.rows(), k, seed);
  Matrix x = take_rows(data, rows);
  Matrix z = model.encode(x);
  Matrix g = model.decode(z);
  return {std::move(rows), PointCloud(std::move(x)), PointCloud(std::move(z)), PointCloud(std::move(g))};
}

PersistenceDiagram cloud_diagram(const PointCloud& cloud, int max_dim) {
  return compute_persistence(build_vr(distance_matrix(cloud), max_dim));
}

ManifoldComparison compare_manifolds(const PointCloud& a, const PointCloud& b, const CompareConfig& cfg) {
  if (a.dim() != b.dim())
    throw InputError("compare_manifolds: clouds live in R^" + std::to_string(a.dim()) + " and R^" +
                     std::to_string(b.dim()));
  const DistanceMatrix da = distance_matrix(a);
  const DistanceMatrix db = distance_matrix(b);
  ManifoldComparison out;
  out.threshold = std::max(da.max_distance(), db.max_distance());
  // A zero diameter on both sides means coincident points; the default
  // threshold already yields the full complex.
  auto build = [&](const DistanceMatrix& d) {
    return out.threshold > 0.0 ? build_vr(d, cfg.max_dim, out.threshold) : build_vr(d, cfg.max_dim);
  };
  out.first = compute_persistence(build(da));
  out.second = compute_persistence(build(db));
  out.distance = combined_bottleneck(out.first, out.second, cfg.aggregation);
  return out;
}

std::uint64_t scatter_round_seed(std::uint64_t seed, std::size_t round) {
  return derive_seed(seed, 0x5ca7'0000ULL + round);
}

ScatterResult scatter_score(const PointCloud& z, const ScatterConfig& cfg) {
  const bool fraction_ok =
      cfg.fraction >= 0.5 && (cfg.fraction < 1.0 || (cfg.allow_full_sample && cfg.fraction == 1.0));
  if (!fraction_ok) throw InputError("scatter fraction must be in [0.5, 1)");
  if (cfg.rounds < 2) throw InputError("scatter needs at least 2 bootstrap rounds");

  ScatterResult out;
  out.rounds = cfg.rounds;
  out.subsample_size = static_cast<std::size_t>(std::ceil(cfg.fraction * static_cast<double>(z.size())));
  out.threshold = distance_matrix(z).max_distance();

  std::vector<std::future<PersistenceDiagram>> pending;
  for (std::size_t r = 0; r < cfg.rounds; ++r)
    pending.push_back(std::async(std::launch::async, [&, r] {
      return diagram_at(subsample(z, out.subsample_size, scatter_round_seed(cfg.seed, r)), cfg.max_dim,
                        out.threshold);
    }));
  std::vector<PersistenceDiagram> diagrams;
  for (auto& f : pending) diagrams.push_back(f.get());

  double sum = 0.0;
  for (std::size_t i = 0; i < diagrams.size(); ++i)
    for (std::size_t j = i + 1; j < diagrams.size(); ++j) {
      const double d = combined_bottleneck(diagrams[i], diagrams[j], cfg.aggregation).value;
      out.pairwise.push_back(d);
      sum += d;
      out.max = std::max(out.max, d);
    }
  out.mean = sum / static_cast<double>(out.pairwise.size());
  return out;
}

}  // namespace phom
