#include "entrot/cost.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace entrot {

std::string to_string(CostKind kind) {
  switch (kind) {
    case CostKind::Linear: return "linear";
    case CostKind::Quadratic: return "quadratic";
    case CostKind::Explicit: return "explicit";
  }
  return "explicit";
}

CostKind cost_kind_from_string(const std::string& name) {
  if (name == "linear") return CostKind::Linear;
  if (name == "quadratic") return CostKind::Quadratic;
  if (name == "explicit") return CostKind::Explicit;
  throw Error("unknown cost kind '" + name + "'");
}

namespace {

double norm(const Point& p) {
  double s = 0.0;
  for (double v : p) s += v * v;
  return std::sqrt(s);
}

double radius(const std::vector<Point>& pts) {
  double r = 0.0;
  for (const auto& p : pts) r = std::max(r, norm(p));
  return r;
}

void check_finite(const Matrix& m) {
  for (double v : m.data()) require(std::isfinite(v), "cost entries must be finite");
}

}  // namespace

CostModel::CostModel(Matrix m, CostKind kind, CostMeta meta)
    : matrix_(std::move(m)), kind_(kind), meta_(meta) {}

CostModel CostModel::build(CostKind kind, const std::vector<Point>& x, const std::vector<Point>& y,
                           std::size_t max_support) {
  require(kind != CostKind::Explicit, "build: explicit costs come from a matrix");
  require(!x.empty() && !y.empty(), "build: supports must be nonempty");
  require(x.size() <= max_support && y.size() <= max_support, "build: support exceeds configured cap");
  const std::size_t d = x.front().size();
  for (const auto& p : x) {
    require(p.size() == d, "build: dimension mismatch");
    for (double v : p) require(std::isfinite(v), "build: NaN/inf coordinate");
  }
  for (const auto& p : y) {
    require(p.size() == d, "build: dimension mismatch");
    for (double v : p) require(std::isfinite(v), "build: NaN/inf coordinate");
  }

  Matrix m(x.size(), y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < y.size(); ++j) {
      double s = 0.0;
      if (kind == CostKind::Linear) {
        for (std::size_t k = 0; k < d; ++k) s -= x[i][k] * y[j][k];
      } else {
        for (std::size_t k = 0; k < d; ++k) {
          const double z = x[i][k] - y[j][k];
          s += z * z;
        }
      }
      m(i, j) = s;
    }
  }
  check_finite(m);

  CostMeta meta;
  meta.c_osc = m.max() - m.min();
  meta.r_x = radius(x);
  if (kind == CostKind::Linear) {
    meta.lip = radius(y);
    meta.xi = 0.0;
    meta.zeta = 0.0;
  } else {
    meta.lip = 2.0 * (meta.r_x + radius(y));
    meta.xi = 2.0;
    meta.zeta = 2.0;
  }
  return CostModel(std::move(m), kind, meta);
}

CostModel CostModel::from_matrix(Matrix matrix, double xi, double zeta, double r_x) {
  require(!matrix.empty(), "cost matrix must be nonempty");
  check_finite(matrix);
  require(xi >= 0.0 && zeta >= 0.0 && r_x >= 0.0, "cost constants must be nonnegative");
  CostMeta meta;
  meta.c_osc = matrix.max() - matrix.min();
  meta.xi = xi;
  meta.zeta = zeta;
  meta.r_x = r_x;
  return CostModel(std::move(matrix), CostKind::Explicit, meta);
}

CostModel CostModel::shifted(double a) const {
  Matrix m = matrix_;
  for (double& v : m.data()) v += a;
  CostMeta meta = meta_;
  meta.c_osc = m.max() - m.min();
  return CostModel(std::move(m), kind_, meta);
}

CostModel CostModel::scaled(double s) const {
  require(s > 0.0, "scale must be positive");
  Matrix m = matrix_;
  for (double& v : m.data()) v *= s;
  CostMeta meta = meta_;
  meta.c_osc = m.max() - m.min();
  if (meta.lip) *meta.lip *= s;
  meta.xi *= s;
  meta.zeta *= s;
  // A rescaled builtin is no longer the builtin formula.
  return CostModel(std::move(m), s == 1.0 ? kind_ : CostKind::Explicit, meta);
}

double oscillation(const CostModel& c) { return c.matrix().max() - c.matrix().min(); }

Matrix load_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open cost CSV '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        throw Error(path + ":" + std::to_string(lineno) + ": not a number: '" + cell + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw Error(path + ":" + std::to_string(lineno) + ": ragged row");
    rows.push_back(std::move(row));
  }
  require(!rows.empty(), path + ": empty cost matrix");
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

}  // namespace entrot
