#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <vector>

#include "../support/instances.hpp"
#include "entrot/transport_lp.hpp"

using namespace entrot;

namespace {

// Brute force over permutations for uniform weights: the optimum is a permutation.
double assignment_brute_force(const Matrix& c) {
  std::vector<std::size_t> perm(c.rows());
  std::iota(perm.begin(), perm.end(), 0);
  double best = INFINITY;
  do {
    double s = 0.0;
    for (std::size_t i = 0; i < perm.size(); ++i) s += c(i, perm[i]);
    best = std::min(best, s / static_cast<double>(perm.size()));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

std::vector<double> normalized(std::vector<double> w) {
  double s = 0.0;
  for (double x : w) s += x;
  for (double& x : w) x /= s;
  return w;
}

}  // namespace

TEST(TransportLP, TwoPoint) {
  Matrix c(2, 2, 0.0);
  c(1, 1) = -1.0;
  const std::vector<double> w{0.5, 0.5};
  const TransportSolution s = solve_transport_lp(c, w, w);
  EXPECT_NEAR(s.cost, -0.5, 1e-15);
  EXPECT_NEAR(s.plan(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(s.plan(1, 1), 0.5, 1e-15);
}

TEST(TransportLP, MatchesAssignmentBruteForce) {
  Rng rng(41);
  for (int k = 0; k < 40; ++k) {
    const std::size_t n = 2 + rng.index(5);
    Matrix c(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) c(i, j) = rng.uniform(-1.0, 2.0);
    const std::vector<double> w(n, 1.0 / static_cast<double>(n));
    EXPECT_NEAR(solve_transport_lp(c, w, w).cost, assignment_brute_force(c), 1e-12);
  }
}

TEST(TransportLP, FeasibilityAndDuality) {
  Rng rng(42);
  for (int k = 0; k < 40; ++k) {
    const std::size_t n = 1 + rng.index(15), m = 1 + rng.index(15);
    Matrix c(n, m);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j) c(i, j) = rng.uniform(0.0, 1.0);
    const auto a = normalized(fixtures::random_weights(rng, n));
    const auto b = normalized(fixtures::random_weights(rng, m));
    const TransportSolution s = solve_transport_lp(c, a, b);
    const auto rs = s.plan.row_sums(), cs = s.plan.col_sums();
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(rs[i], a[i], 1e-12);
    for (std::size_t j = 0; j < m; ++j) EXPECT_NEAR(cs[j], b[j], 1e-12);
    double primal = 0.0, dual = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        EXPECT_GE(s.plan(i, j), 0.0);
        primal += c(i, j) * s.plan(i, j);
        EXPECT_LE(s.phi[i] + s.psi[j], c(i, j) + 1e-12);
      }
    for (std::size_t i = 0; i < n; ++i) dual += a[i] * s.phi[i];
    for (std::size_t j = 0; j < m; ++j) dual += b[j] * s.psi[j];
    EXPECT_NEAR(primal, s.cost, 1e-12);
    EXPECT_NEAR(dual, s.cost, 1e-10);
  }
}

TEST(TransportLP, RejectsBadInput) {
  Matrix c(2, 2, 0.0);
  EXPECT_THROW(solve_transport_lp(c, std::vector<double>{0.5, 0.5}, std::vector<double>{1.0}), Error);
  EXPECT_THROW(solve_transport_lp(c, std::vector<double>{0.5, 0.5}, std::vector<double>{0.9, 0.3}), Error);
}
