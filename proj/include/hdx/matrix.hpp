#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace hdx {

// Dense row-major matrix of normalized feature values.
class RecordMatrix {
 public:
  RecordMatrix() = default;
  explicit RecordMatrix(std::size_t cols) : cols_(cols) {}

  [[nodiscard]] std::size_t rows() const noexcept { return cols_ == 0 ? 0 : values_.size() / cols_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  [[nodiscard]] bool empty() const noexcept { return values_.empty(); }

  [[nodiscard]] std::span<const double> row(std::size_t i) const {
    return std::span<const double>(values_).subspan(i * cols_, cols_);
  }
  [[nodiscard]] std::span<double> row(std::size_t i) {
    return std::span<double>(values_).subspan(i * cols_, cols_);
  }

  double& at(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
  [[nodiscard]] double at(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }

  void append_row(std::span<const double> values) {
    if (values.size() != cols_) {
      throw std::invalid_argument("RecordMatrix::append_row: arity mismatch");
    }
    values_.insert(values_.end(), values.begin(), values.end());
  }

  void reserve_rows(std::size_t n) { values_.reserve(n * cols_); }

  friend bool operator==(const RecordMatrix&, const RecordMatrix&) = default;

 private:
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

}  // namespace hdx
