#pragma once

#include <optional>
#include <string>
#include <vector>

#include "entrot/common.hpp"
#include "entrot/measure.hpp"

namespace entrot {

enum class CostKind {
  Linear,     ///< c(x, y) = -<x, y>
  Quadratic,  ///< c(x, y) = ||x - y||^2
  Explicit,   ///< user-supplied matrix
};

std::string to_string(CostKind kind);
CostKind cost_kind_from_string(const std::string& name);

/// Constants consumed by the contraction formulas. None of them feed the solver.
struct CostMeta {
  double c_osc = 0.0;         ///< max entry - min entry
  std::optional<double> lip;  ///< Lipschitz constant in x, unknown for explicit matrices
  double xi = 0.0;            ///< semi-concavity modulus in x
  double zeta = 0.0;          ///< semi-convexity modulus in x
  double r_x = 0.0;           ///< max ||x_i||
};

/// Default cap on either support size.
inline constexpr std::size_t kMaxSupport = 4000;

/// Dense cost matrix over spt(mu) x spt(nu) plus its metadata.
class CostModel {
 public:
  static CostModel build(CostKind kind, const std::vector<Point>& x, const std::vector<Point>& y,
                         std::size_t max_support = kMaxSupport);

  /// Explicit matrix; semi-concavity/convexity constants must be supplied by
  /// the caller since they cannot be inferred from samples.
  static CostModel from_matrix(Matrix matrix, double xi = 0.0, double zeta = 0.0, double r_x = 0.0);

  std::size_t rows() const { return matrix_.rows(); }
  std::size_t cols() const { return matrix_.cols(); }
  double operator()(std::size_t i, std::size_t j) const { return matrix_(i, j); }
  const Matrix& matrix() const { return matrix_; }
  CostKind kind() const { return kind_; }
  const CostMeta& meta() const { return meta_; }
  double c_osc() const { return meta_.c_osc; }

  /// c + a entrywise; metadata unchanged.
  CostModel shifted(double a) const;

  /// s * c entrywise (s > 0); constants rescaled accordingly.
  CostModel scaled(double s) const;

 private:
  CostModel(Matrix m, CostKind kind, CostMeta meta);

  Matrix matrix_;
  CostKind kind_ = CostKind::Explicit;
  CostMeta meta_;
};

/// max entry - min entry.
double oscillation(const CostModel& c);

/// Row-major numeric CSV: |X| rows, |Y| columns.
Matrix load_matrix_csv(const std::string& path);

}  // namespace entrot
