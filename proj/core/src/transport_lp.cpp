#include "entrot/transport_lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace entrot {

TransportSolution solve_transport_lp(const Matrix& c, std::span<const double> a, std::span<const double> b) {
  const std::size_t n = c.rows(), m = c.cols();
  require(a.size() == n && b.size() == m, "marginals do not match the cost matrix");
  constexpr double inf = std::numeric_limits<double>::infinity();
  double total = 0.0;
  double total_b = 0.0;
  for (double w : a) total += w;
  for (double w : b) total_b += w;
  require(std::abs(total - total_b) <= 1e-12 * std::max(total, 1.0), "marginals have different total mass");
  const double eps = 1e-14 * std::max(total, 1.0);

  // Nodes 0..n-1 are sources, n..n+m-1 sinks. Forward arcs i->j are
  // uncapacitated; the residual arc j->i carries flow(i,j).
  Matrix flow(n, m, 0.0);
  Vector supply(a.begin(), a.end()), demand(b.begin(), b.end());
  Vector pi(n + m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    double lo = inf;
    for (std::size_t i = 0; i < n; ++i) lo = std::min(lo, c(i, j));
    pi[n + j] = lo;
  }

  TransportSolution sol;
  Vector dist(n + m);
  std::vector<std::ptrdiff_t> parent(n + m);
  std::vector<char> done(n + m);
  for (;;) {
    bool any = false;
    std::fill(dist.begin(), dist.end(), inf);
    std::fill(parent.begin(), parent.end(), -1);
    std::fill(done.begin(), done.end(), 0);
    for (std::size_t i = 0; i < n; ++i)
      if (supply[i] > eps) dist[i] = 0.0, any = true;
    if (!any) break;

    std::ptrdiff_t target = -1;
    for (;;) {
      std::ptrdiff_t u = -1;
      for (std::size_t v = 0; v < n + m; ++v)
        if (!done[v] && dist[v] < inf && (u < 0 || dist[v] < dist[static_cast<std::size_t>(u)])) u = static_cast<std::ptrdiff_t>(v);
      if (u < 0) break;
      const auto uu = static_cast<std::size_t>(u);
      done[uu] = 1;
      if (uu >= n && demand[uu - n] > eps) {
        target = u;
        break;
      }
      if (uu < n) {
        for (std::size_t j = 0; j < m; ++j) {
          const std::size_t v = n + j;
          if (done[v]) continue;
          const double nd = dist[uu] + std::max(c(uu, j) + pi[uu] - pi[v], 0.0);
          if (nd < dist[v]) dist[v] = nd, parent[v] = u;
        }
      } else {
        const std::size_t j = uu - n;
        for (std::size_t i = 0; i < n; ++i) {
          if (done[i] || flow(i, j) <= eps) continue;
          const double nd = dist[uu] + std::max(-c(i, j) + pi[uu] - pi[i], 0.0);
          if (nd < dist[i]) dist[i] = nd, parent[i] = u;
        }
      }
    }
    require(target >= 0, "transport problem infeasible");
    const double dt = dist[static_cast<std::size_t>(target)];
    for (std::size_t v = 0; v < n + m; ++v) pi[v] += std::min(dist[v], dt);

    // Bottleneck along the path back to a source.
    double amount = demand[static_cast<std::size_t>(target) - n];
    std::size_t v = static_cast<std::size_t>(target);
    while (parent[v] >= 0) {
      const auto u = static_cast<std::size_t>(parent[v]);
      if (u >= n) amount = std::min(amount, flow(v, u - n));
      v = u;
    }
    amount = std::min(amount, supply[v]);
    supply[v] -= amount;
    demand[static_cast<std::size_t>(target) - n] -= amount;
    v = static_cast<std::size_t>(target);
    while (parent[v] >= 0) {
      const auto u = static_cast<std::size_t>(parent[v]);
      if (u < n)
        flow(u, v - n) += amount;
      else
        flow(v, u - n) = std::max(flow(v, u - n) - amount, 0.0);
      v = u;
    }
    ++sol.augmentations;
  }

  sol.plan = std::move(flow);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) sol.cost += c(i, j) * sol.plan(i, j);
  sol.phi.assign(n, 0.0);
  sol.psi.assign(m, 0.0);
  for (std::size_t i = 0; i < n; ++i) sol.phi[i] = -pi[i];
  for (std::size_t j = 0; j < m; ++j) sol.psi[j] = pi[n + j];
  return sol;
}

}  // namespace entrot
