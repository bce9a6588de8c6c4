#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "phom/matrix.hpp"

namespace phom {

inline constexpr std::size_t kFeatureCount = 29;  // V1..V28 + Amount

// Transactions: V1..V28 verbatim and a standardized Amount column; labels are
// the Class flags (1 = fraud, 0 = normal).
struct Dataset {
  Matrix features;
  std::vector<int> labels;
  double amount_mean = 0.0;
  double amount_std = 1.0;  // divisor actually used

  std::size_t size() const { return features.rows(); }
  std::vector<std::size_t> rows_with_label(int label) const;
};

// Reads `Time,V1,...,V28,Amount,Class` (fields may be double-quoted). Time is
// dropped; Amount becomes (x - mean) / std with the population std of the file,
// or divisor 1 when that std is 0. Errors name the line and column.
Dataset parse_csv(std::istream& in, const std::string& source = "<input>");
Dataset load_csv(const std::filesystem::path& path);

}  // namespace phom
