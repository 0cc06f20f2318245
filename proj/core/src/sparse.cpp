#include "navslip/sparse.hpp"

#include <algorithm>

namespace navslip {

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  const std::size_t n = size();
  for (std::size_t r = 0; r < n; ++r) {
    double s = 0.0;
    for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p)
      s += values_[p] * x[cols_[p]];
    y[r] = s;
  }
}

double CsrMatrix::diagonal(std::size_t r) const {
  for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p)
    if (cols_[p] == r) return values_[p];
  return 0.0;
}

std::vector<std::pair<std::size_t, double>> CsrMatrix::row(std::size_t r) const {
  std::vector<std::pair<std::size_t, double>> out;
  for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p)
    out.emplace_back(cols_[p], values_[p]);
  return out;
}

std::vector<std::pair<std::size_t, double>> SparseRow::compiled() const {
  auto e = entries_;
  std::stable_sort(e.begin(), e.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::pair<std::size_t, double>> out;
  for (const auto& [c, v] : e) {
    if (!out.empty() && out.back().first == c)
      out.back().second += v;
    else
      out.emplace_back(c, v);
  }
  std::erase_if(out, [](const auto& p) { return p.second == 0.0; });
  return out;
}

CsrMatrix SparseRowBuilder::build(std::span<const SparseRow> rows) {
  CsrMatrix m;
  m.row_ptr_.reserve(rows.size() + 1);
  m.row_ptr_.push_back(0);
  for (const SparseRow& r : rows) {
    for (const auto& [c, v] : r.compiled()) {
      m.cols_.push_back(c);
      m.values_.push_back(v);
    }
    m.row_ptr_.push_back(m.cols_.size());
  }
  return m;
}

}  // namespace navslip
