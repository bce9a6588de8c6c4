#include "phom/bottleneck.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

namespace phom {
namespace {

struct Point2 {
  double birth;
  double death;
};

double linf(const Point2& p, const Point2& q) {
  return std::max(std::abs(p.birth - q.birth), std::abs(p.death - q.death));
}

double diagonal_cost(const Point2& p) { return (p.death - p.birth) / 2.0; }

// Hopcroft-Karp on a bipartite graph with `left` and `right` vertex sets.
class BipartiteMatcher {
 public:
  BipartiteMatcher(std::size_t left, std::size_t right)
      : adjacency_(left), match_left_(left, kFree), match_right_(right, kFree), layer_(left) {}

  void add_edge(std::size_t u, std::size_t v) { adjacency_[u].push_back(v); }

  std::size_t maximum_matching() {
    std::size_t size = 0;
    while (bfs())
      for (std::size_t u = 0; u < adjacency_.size(); ++u)
        if (match_left_[u] == kFree && dfs(u)) ++size;
    return size;
  }

 private:
  static constexpr std::size_t kFree = static_cast<std::size_t>(-1);
  static constexpr std::size_t kUnreached = static_cast<std::size_t>(-1);

  bool bfs() {
    std::queue<std::size_t> queue;
    for (std::size_t u = 0; u < adjacency_.size(); ++u) {
      if (match_left_[u] == kFree) {
        layer_[u] = 0;
        queue.push(u);
      } else {
        layer_[u] = kUnreached;
      }
    }
    bool found_free = false;
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop();
      for (std::size_t v : adjacency_[u]) {
        const std::size_t w = match_right_[v];
        if (w == kFree) {
          found_free = true;
        } else if (layer_[w] == kUnreached) {
          layer_[w] = layer_[u] + 1;
          queue.push(w);
        }
      }
    }
    return found_free;
  }

  bool dfs(std::size_t u) {
    for (std::size_t v : adjacency_[u]) {
      const std::size_t w = match_right_[v];
      if (w == kFree || (layer_[w] == layer_[u] + 1 && dfs(w))) {
        match_left_[u] = v;
        match_right_[v] = u;
        return true;
      }
    }
    layer_[u] = kUnreached;
    return false;
  }

  std::vector<std::vector<std::size_t>> adjacency_;
  std::vector<std::size_t> match_left_;
  std::vector<std::size_t> match_right_;
  std::vector<std::size_t> layer_;
};

// Left side: points of A, then one diagonal copy per point of B.
// Right side: points of B, then one diagonal copy per point of A.
bool perfect_matching_within(const std::vector<Point2>& a, const std::vector<Point2>& b,
                             double radius) {
  const std::size_t n = a.size(), m = b.size();
  BipartiteMatcher matcher(n + m, n + m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j)
      if (linf(a[i], b[j]) <= radius) matcher.add_edge(i, j);
    if (diagonal_cost(a[i]) <= radius) matcher.add_edge(i, m + i);
  }
  for (std::size_t j = 0; j < m; ++j) {
    if (diagonal_cost(b[j]) <= radius) matcher.add_edge(n + j, j);
    for (std::size_t i = 0; i < n; ++i) matcher.add_edge(n + j, m + i);
  }
  return matcher.maximum_matching() == n + m;
}

double finite_bottleneck(const std::vector<Point2>& a, const std::vector<Point2>& b) {
  if (a.empty() && b.empty()) return 0.0;
  std::vector<double> candidates;
  candidates.reserve(a.size() * b.size() + a.size() + b.size() + 1);
  candidates.push_back(0.0);
  for (const auto& p : a) candidates.push_back(diagonal_cost(p));
  for (const auto& q : b) candidates.push_back(diagonal_cost(q));
  for (const auto& p : a)
    for (const auto& q : b) candidates.push_back(linf(p, q));
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  // Matching everything to the diagonal is always feasible at the largest
  // diagonal cost, so the last candidate is feasible.
  std::size_t lo = 0, hi = candidates.size() - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (perfect_matching_within(a, b, candidates[mid]))
      hi = mid;
    else
      lo = mid + 1;
  }
  return candidates[lo];
}

}  // namespace

double bottleneck_distance(const PersistenceDiagram& a, const PersistenceDiagram& b, int dim) {
  std::vector<Point2> finite_a, finite_b;
  std::vector<double> essential_a, essential_b;
  auto split = [dim](const PersistenceDiagram& d, std::vector<Point2>& finite,
                     std::vector<double>& essential) {
    for (const auto& p : d.pairs) {
      if (p.dim != dim)
        throw InputError("bottleneck_distance: diagram holds dimension " + std::to_string(p.dim) +
                         " but dimension " + std::to_string(dim) + " was requested");
      if (p.essential())
        essential.push_back(p.birth);
      else
        finite.push_back({p.birth, p.death});
    }
  };
  split(a, finite_a, essential_a);
  split(b, finite_b, essential_b);

  if (essential_a.size() != essential_b.size()) return kInfinity;
  std::sort(essential_a.begin(), essential_a.end());
  std::sort(essential_b.begin(), essential_b.end());
  double essential_cost = 0.0;
  for (std::size_t i = 0; i < essential_a.size(); ++i)
    essential_cost = std::max(essential_cost, std::abs(essential_a[i] - essential_b[i]));

  return std::max(essential_cost, finite_bottleneck(finite_a, finite_b));
}

std::string_view to_string(Aggregation rule) {
  switch (rule) {
    case Aggregation::kMax: return "max";
    case Aggregation::kDim0: return "dim0";
    case Aggregation::kDim1: return "dim1";
  }
  return "max";
}

Aggregation parse_aggregation(std::string_view text) {
  if (text == "max") return Aggregation::kMax;
  if (text == "dim0") return Aggregation::kDim0;
  if (text == "dim1") return Aggregation::kDim1;
  throw InputError("unknown aggregation rule '" + std::string(text) + "' (expected max, dim0 or dim1)");
}

CombinedBottleneck combined_bottleneck(const PersistenceDiagram& a, const PersistenceDiagram& b,
                                       Aggregation rule) {
  CombinedBottleneck out;
  out.rule = rule;
  for (int dim = 0; dim <= 1; ++dim)
    out.per_dim[dim] = bottleneck_distance(a.restricted(dim), b.restricted(dim), dim);
  switch (rule) {
    case Aggregation::kMax: out.value = std::max(out.per_dim[0], out.per_dim[1]); break;
    case Aggregation::kDim0: out.value = out.per_dim[0]; break;
    case Aggregation::kDim1: out.value = out.per_dim[1]; break;
  }
  return out;
}

}  // namespace phom
