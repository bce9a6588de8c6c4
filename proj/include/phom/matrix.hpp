#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "phom/error.hpp"

namespace phom {

// Dense row-major matrix of doubles. Rows are samples throughout the library.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    Matrix m;
    m.rows_ = rows.size();
    m.cols_ = rows.size() == 0 ? 0 : rows.begin()->size();
    m.data_.reserve(m.rows_ * m.cols_);
    for (const auto& r : rows) {
      if (r.size() != m.cols_) throw InputError("Matrix::from_rows: ragged rows");
      m.data_.insert(m.data_.end(), r.begin(), r.end());
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }

  bool same_shape(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Rows `indices` of `m`, in the given order.
inline Matrix take_rows(const Matrix& m, std::span<const std::size_t> indices) {
  Matrix out(indices.size(), m.cols());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    auto src = m.row(indices[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

// Columns [first, first + count) of `m`.
inline Matrix take_cols(const Matrix& m, std::size_t first, std::size_t count) {
  Matrix out(m.rows(), count);
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < count; ++c) out(r, c) = m(r, first + c);
  return out;
}

}  // namespace phom
