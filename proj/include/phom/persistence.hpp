#pragma once

#include <limits>
#include <map>
#include <vector>

#include "phom/vietoris_rips.hpp"

namespace phom {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// One interval [birth, death) in homology dimension `dim`. death == +inf marks
// an essential class.
struct PersistencePair {
  int dim = 0;
  double birth = 0.0;
  double death = kInfinity;

  bool essential() const { return death == kInfinity; }
  double persistence() const { return death - birth; }

  friend bool operator==(const PersistencePair&, const PersistencePair&) = default;
  friend auto operator<=>(const PersistencePair&, const PersistencePair&) = default;
};

// Multiset of pairs, kept sorted by (dim, birth, death).
struct PersistenceDiagram {
  std::vector<PersistencePair> pairs;
  double threshold = 0.0;

  // Sorts the pairs into canonical order.
  void normalize();

  // Pairs of dimension `dim` only; threshold kept.
  PersistenceDiagram restricted(int dim) const;

  std::size_t count(int dim) const;
  std::size_t essential_count(int dim) const;

  friend bool operator==(const PersistenceDiagram&, const PersistenceDiagram&) = default;
};

struct Interval {
  double birth = 0.0;
  double death = kInfinity;
  friend bool operator==(const Interval&, const Interval&) = default;
};

// Interval view of a diagram: bars grouped by dimension, each group sorted by
// birth then death.
struct Barcode {
  std::map<int, std::vector<Interval>> bars;
  double threshold = 0.0;

  std::size_t count(int dim) const;
  PersistenceDiagram to_diagram() const;

  friend bool operator==(const Barcode&, const Barcode&) = default;
};

// Persistence diagram of a Rips filtration over Z/2 by column reduction of the
// boundary matrix (with clearing). Reports H0 and, when the filtration has
// triangles, H1. Zero-length intervals are dropped; unpaired simplices of
// dimension < max_dim become essential classes. Throws InputError if the
// filtration is not closed under faces.
PersistenceDiagram compute_persistence(const Filtration& f);

Barcode barcodes(const PersistenceDiagram& diagram);

}  // namespace phom
