#include "entrot/common.hpp"

#include <algorithm>
#include <cmath>

namespace entrot {

double Matrix::min() const {
  require(!data_.empty(), "min of empty matrix");
  return *std::min_element(data_.begin(), data_.end());
}

double Matrix::max() const {
  require(!data_.empty(), "max of empty matrix");
  return *std::max_element(data_.begin(), data_.end());
}

std::vector<double> Matrix::row_sums() const {
  std::vector<double> out(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (double v : row(i)) s += v;
    out[i] = s;
  }
  return out;
}

std::vector<double> Matrix::col_sums() const {
  std::vector<double> out(cols_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    const auto r = row(i);
    for (std::size_t j = 0; j < cols_; ++j) out[j] += r[j];
  }
  return out;
}

double oscillation(std::span<const double> f) {
  if (f.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(f.begin(), f.end());
  return *hi - *lo;
}

double max_abs(std::span<const double> f) {
  double m = 0.0;
  for (double v : f) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace entrot
