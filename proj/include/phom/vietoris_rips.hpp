#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "phom/geometry.hpp"

namespace phom {

// A vertex, edge or triangle with its filtration value (the largest pairwise
// distance among its vertices; 0 for a vertex).
struct Simplex {
  std::array<std::uint32_t, 3> vertices{};  // strictly increasing, first `count` used
  std::uint8_t count = 1;
  double value = 0.0;

  int dim() const { return count - 1; }
  std::span<const std::uint32_t> verts() const { return {vertices.data(), count}; }

  static Simplex vertex(std::uint32_t v) { return {{v, 0, 0}, 1, 0.0}; }
  static Simplex edge(std::uint32_t a, std::uint32_t b, double value) { return {{a, b, 0}, 2, value}; }
  static Simplex triangle(std::uint32_t a, std::uint32_t b, std::uint32_t c, double value) {
    return {{a, b, c}, 3, value};
  }

  friend bool operator==(const Simplex&, const Simplex&) = default;
};

// Filtration order: value, then dimension, then lexicographic vertices.
bool filtration_less(const Simplex& a, const Simplex& b);

struct Filtration {
  std::vector<Simplex> simplices;  // in filtration order
  double threshold = 0.0;
  std::size_t n_vertices = 0;
  int max_dim = 2;
};

// Vietoris-Rips filtration up to dimension `max_dim` (1 or 2) with edges of
// length <= threshold. The threshold must be positive (it may be +inf).
Filtration build_vr(const DistanceMatrix& d, int max_dim, double threshold);

// Same, with the threshold set to the largest pairwise distance, so the final
// complex is the full simplex skeleton.
Filtration build_vr(const DistanceMatrix& d, int max_dim = 2);

// Throws InputError unless every face of every simplex appears earlier with a
// value <= the simplex's value, and the order matches filtration_less.
void check_filtration(const Filtration& f);

}  // namespace phom
