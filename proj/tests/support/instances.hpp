#pragma once

// Random problem generators shared by the unit and acceptance tests.

#include <cmath>
#include <cstdint>
#include <vector>

#include "entrot/cost.hpp"
#include "entrot/measure.hpp"
#include "entrot/rng.hpp"
#include "entrot/sinkhorn.hpp"

namespace entrot::fixtures {

inline std::vector<Point> random_points(Rng& rng, std::size_t n, std::size_t d, double lo = -1.0, double hi = 1.0) {
  std::vector<Point> pts(n, Point(d));
  for (auto& p : pts)
    for (double& x : p) x = rng.uniform(lo, hi);
  return pts;
}

inline std::vector<double> random_weights(Rng& rng, std::size_t n, double lo = 0.1) {
  std::vector<double> w(n);
  for (double& x : w) x = rng.uniform(lo, 1.0);
  return w;
}

inline Vector random_vector(Rng& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
  Vector v(n);
  for (double& x : v) x = rng.uniform(lo, hi);
  return v;
}

/// Random weighted supports of size 2..max_n in dimension 1..2, a cost drawn
/// among linear, quadratic and an explicit uniform matrix, lambda in [lam_lo, lam_hi].
inline Problem random_problem(Rng& rng, std::size_t max_n = 60, double lam_lo = 0.05, double lam_hi = 2.0) {
  const std::size_t n = 2 + rng.index(max_n - 1);
  const std::size_t m = 2 + rng.index(max_n - 1);
  const std::size_t d = 1 + rng.index(2);
  auto x = random_points(rng, n, d);
  auto y = random_points(rng, m, d);
  DiscreteMeasure mu(x, random_weights(rng, n));
  DiscreteMeasure nu(y, random_weights(rng, m));
  const std::size_t kind = rng.index(3);
  CostModel cost = kind == 0   ? CostModel::build(CostKind::Linear, mu.points(), nu.points())
                   : kind == 1 ? CostModel::build(CostKind::Quadratic, mu.points(), nu.points())
                               : [&] {
                                   Matrix c(mu.size(), nu.size());
                                   for (std::size_t i = 0; i < c.rows(); ++i)
                                     for (std::size_t j = 0; j < c.cols(); ++j) c(i, j) = rng.uniform();
                                   return CostModel::from_matrix(std::move(c));
                                 }();
  return Problem(std::move(mu), std::move(nu), std::move(cost),
                 std::exp(rng.uniform(std::log(lam_lo), std::log(lam_hi))));
}

inline Potential random_potential(Rng& rng, const Problem& prob, double scale = 1.0) {
  return {random_vector(rng, prob.nu().size(), -scale, scale), Side::Y, Normalization::Raw};
}

/// X = Y = {0, 1}, uniform weights, c = -xy.
inline Problem two_point_problem(double lambda = 1.0) {
  std::vector<Point> pts{{0.0}, {1.0}};
  DiscreteMeasure mu = DiscreteMeasure::uniform(pts);
  DiscreteMeasure nu = DiscreteMeasure::uniform(pts);
  CostModel c = CostModel::build(CostKind::Linear, mu.points(), nu.points());
  return Problem(std::move(mu), std::move(nu), std::move(c), lambda);
}

}  // namespace entrot::fixtures
