#pragma once

#include <array>
#include <string>
#include <string_view>

#include "phom/persistence.hpp"

namespace phom {

// Bottleneck distance between two diagrams of the single dimension `dim`.
//
// Finite points may be matched to each other (L-inf cost) or to the diagonal
// (cost (death - birth) / 2). Essential points match only essential points:
// births are sorted and paired in order. Unequal essential counts give +inf.
// Throws InputError if either diagram holds a pair of another dimension.
double bottleneck_distance(const PersistenceDiagram& a, const PersistenceDiagram& b, int dim);

// How per-dimension distances collapse to one number.
enum class Aggregation { kMax, kDim0, kDim1 };

std::string_view to_string(Aggregation rule);
Aggregation parse_aggregation(std::string_view text);

struct CombinedBottleneck {
  double value = 0.0;
  std::array<double, 2> per_dim{};  // H0, H1
  Aggregation rule = Aggregation::kMax;

  friend bool operator==(const CombinedBottleneck&, const CombinedBottleneck&) = default;
};

// Bottleneck distances in H0 and H1, aggregated by `rule`.
CombinedBottleneck combined_bottleneck(const PersistenceDiagram& a, const PersistenceDiagram& b,
                                       Aggregation rule = Aggregation::kMax);

}  // namespace phom
