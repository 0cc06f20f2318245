#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace navslip {

/// Compressed sparse row matrix, square.
class CsrMatrix {
 public:
  CsrMatrix() = default;

  std::size_t size() const noexcept { return row_ptr_.empty() ? 0 : row_ptr_.size() - 1; }
  std::size_t nonzeros() const noexcept { return values_.size(); }

  /// y = A x
  void multiply(std::span<const double> x, std::span<double> y) const;
  double diagonal(std::size_t row) const;
  /// (column, value) pairs of one row, columns ascending.
  std::vector<std::pair<std::size_t, double>> row(std::size_t r) const;

  std::span<const std::size_t> row_ptr() const noexcept { return row_ptr_; }
  std::span<const std::size_t> columns() const noexcept { return cols_; }
  std::span<const double> values() const noexcept { return values_; }

  friend bool operator==(const CsrMatrix&, const CsrMatrix&) = default;

 private:
  friend class SparseRowBuilder;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::size_t> cols_;
  std::vector<double> values_;
};

/// One row under construction: repeated columns are summed on compile and
/// exact zeros dropped, so a coefficient that vanishes leaves no entry.
class SparseRow {
 public:
  void add(std::size_t col, double value) { entries_.emplace_back(col, value); }
  bool empty() const noexcept { return entries_.empty(); }
  void clear() noexcept { entries_.clear(); }
  /// Sorted, merged, zero-free copy.
  std::vector<std::pair<std::size_t, double>> compiled() const;

 private:
  std::vector<std::pair<std::size_t, double>> entries_;
};

class SparseRowBuilder {
 public:
  static CsrMatrix build(std::span<const SparseRow> rows);
};

}  // namespace navslip
