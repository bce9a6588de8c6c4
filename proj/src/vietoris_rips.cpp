#include "phom/vietoris_rips.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

namespace phom {
namespace {

std::uint64_t simplex_key(std::span<const std::uint32_t> v) {
  // 21 bits per vertex, offset by one so that the vertex count is recoverable.
  std::uint64_t key = 0;
  for (auto x : v) key = (key << 21) | (static_cast<std::uint64_t>(x) + 1);
  return key;
}

Filtration build(const DistanceMatrix& d, int max_dim, double threshold) {
  if (max_dim != 1 && max_dim != 2)
    throw InputError("max_dim must be 1 or 2, got " + std::to_string(max_dim));
  const std::size_t n = d.size();
  if (n >= (std::size_t{1} << 21) - 1) throw InputError("too many points for the Rips builder");

  Filtration f;
  f.threshold = threshold;
  f.n_vertices = n;
  f.max_dim = max_dim;
  auto& out = f.simplices;
  out.reserve(n + n * (n - 1) / 2);

  for (std::uint32_t i = 0; i < n; ++i) out.push_back(Simplex::vertex(i));
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = i + 1; j < n; ++j)
      if (d(i, j) <= threshold) out.push_back(Simplex::edge(i, j, d(i, j)));

  if (max_dim == 2) {
    for (std::uint32_t i = 0; i < n; ++i)
      for (std::uint32_t j = i + 1; j < n; ++j) {
        const double dij = d(i, j);
        if (dij > threshold) continue;
        for (std::uint32_t k = j + 1; k < n; ++k) {
          const double value = std::max({dij, d(i, k), d(j, k)});
          if (value <= threshold) out.push_back(Simplex::triangle(i, j, k, value));
        }
      }
  }
  std::sort(out.begin(), out.end(), filtration_less);
  return f;
}

}  // namespace

bool filtration_less(const Simplex& a, const Simplex& b) {
  if (a.value != b.value) return a.value < b.value;
  if (a.count != b.count) return a.count < b.count;
  return std::lexicographical_compare(a.vertices.begin(), a.vertices.begin() + a.count,
                                      b.vertices.begin(), b.vertices.begin() + b.count);
}

Filtration build_vr(const DistanceMatrix& d, int max_dim, double threshold) {
  if (std::isnan(threshold) || !(threshold > 0.0))
    throw InputError("Rips threshold must be positive");
  return build(d, max_dim, threshold);
}

Filtration build_vr(const DistanceMatrix& d, int max_dim) {
  return build(d, max_dim, d.max_distance());
}

void check_filtration(const Filtration& f) {
  std::unordered_map<std::uint64_t, std::size_t> position;
  position.reserve(f.simplices.size());
  for (std::size_t idx = 0; idx < f.simplices.size(); ++idx) {
    const Simplex& s = f.simplices[idx];
    if (s.count < 1 || s.count > 3) throw InputError("simplex with invalid vertex count");
    if (s.value > f.threshold) throw InputError("simplex value exceeds the filtration threshold");
    if (idx > 0 && filtration_less(s, f.simplices[idx - 1]))
      throw InputError("filtration is not sorted at position " + std::to_string(idx));
    auto v = s.verts();
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (v[k] >= f.n_vertices) throw InputError("simplex references unknown vertex");
      if (k > 0 && v[k] <= v[k - 1]) throw InputError("simplex vertices not strictly increasing");
    }
    if (s.count > 1) {
      for (std::size_t skip = 0; skip < s.count; ++skip) {
        std::array<std::uint32_t, 2> face{};
        std::size_t m = 0;
        for (std::size_t k = 0; k < s.count; ++k)
          if (k != skip) face[m++] = v[k];
        auto it = position.find(simplex_key({face.data(), m}));
        if (it == position.end() || f.simplices[it->second].value > s.value)
          throw InputError("filtration is not closed under faces at position " + std::to_string(idx));
      }
    }
    if (!position.emplace(simplex_key(v), idx).second)
      throw InputError("duplicate simplex at position " + std::to_string(idx));
  }
}

}  // namespace phom
