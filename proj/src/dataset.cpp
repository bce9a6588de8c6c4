#include "phom/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <string_view>

#include "phom/error.hpp"

namespace phom {
namespace {

std::vector<std::string> expected_header() {
  std::vector<std::string> names{"Time"};
  for (int i = 1; i <= 28; ++i) names.push_back("V" + std::to_string(i));
  names.push_back("Amount");
  names.push_back("Class");
  return names;
}

std::string_view unquote(std::string_view field) {
  while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.remove_suffix(1);
  while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
  if (field.size() >= 2 && field.front() == '"' && field.back() == '"') {
    field.remove_prefix(1);
    field.remove_suffix(1);
  }
  return field;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(unquote(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

std::vector<std::size_t> Dataset::rows_with_label(int label) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) out.push_back(i);
  return out;
}

Dataset parse_csv(std::istream& in, const std::string& source) {
  const auto header_names = expected_header();
  std::string line;
  if (!std::getline(in, line) || unquote(line).empty())
    throw InputError(source + ": empty file (expected header " + "Time,V1,...,V28,Amount,Class)");

  const auto header = split(line);
  for (std::size_t i = 0; i < std::max(header.size(), header_names.size()); ++i) {
    if (i >= header.size())
      throw InputError(source + ": line 1: missing column '" + header_names[i] + "' (header has " +
                       std::to_string(header.size()) + " columns, expected 31)");
    if (i >= header_names.size())
      throw InputError(source + ": line 1: unexpected extra column '" + std::string(header[i]) +
                       "' at position " + std::to_string(i + 1));
    if (header[i] != header_names[i])
      throw InputError(source + ": line 1: column " + std::to_string(i + 1) + " is '" +
                       std::string(header[i]) + "', expected '" + header_names[i] + "'");
  }

  std::vector<double> values;
  std::vector<double> amounts;
  std::vector<int> labels;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (unquote(line).empty()) continue;
    const auto fields = split(line);
    if (fields.size() != header_names.size())
      throw InputError(source + ": line " + std::to_string(line_no) + ": expected 31 columns, found " +
                       std::to_string(fields.size()));
    double row[31];
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const auto f = fields[c];
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (f.empty() || ec != std::errc() || ptr != f.data() + f.size() || !std::isfinite(v))
        throw InputError(source + ": line " + std::to_string(line_no) + ", column '" + header_names[c] +
                         "': cannot parse '" + std::string(f) + "' as a number");
      row[c] = v;
    }
    if (row[30] != 0.0 && row[30] != 1.0)
      throw InputError(source + ": line " + std::to_string(line_no) + ", column 'Class': label must be 0 or 1");
    values.insert(values.end(), row + 1, row + 29);  // V1..V28
    amounts.push_back(row[29]);
    labels.push_back(static_cast<int>(row[30]));
  }
  if (labels.empty()) throw InputError(source + ": no data rows");

  Dataset ds;
  const std::size_t n = labels.size();
  double mean = 0.0;
  for (double a : amounts) mean += a;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double a : amounts) var += (a - mean) * (a - mean);
  var /= static_cast<double>(n);
  const double spread = std::sqrt(var);
  ds.amount_mean = mean;
  ds.amount_std = spread > 0.0 ? spread : 1.0;

  ds.features = Matrix(n, kFeatureCount);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < 28; ++c) ds.features(r, c) = values[r * 28 + c];
    ds.features(r, 28) = (amounts[r] - ds.amount_mean) / ds.amount_std;
  }
  ds.labels = std::move(labels);
  return ds;
}

Dataset load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return parse_csv(in, path.string());
}

}  // namespace phom
