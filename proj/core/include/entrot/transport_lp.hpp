#pragma once

#include <span>

#include "entrot/common.hpp"

namespace entrot {

struct TransportSolution {
  double cost = 0.0;  ///< sum_ij c_ij gamma_ij
  Matrix plan;
  Vector phi;  ///< on the rows; phi_i + psi_j <= c_ij
  Vector psi;  ///< on the columns
  std::size_t augmentations = 0;
};

/// Exact discrete optimal transport min <c, gamma> over couplings of (a, b),
/// by successive shortest paths with Dijkstra on reduced costs. Dense; meant
/// for supports up to a few hundred points.
TransportSolution solve_transport_lp(const Matrix& c, std::span<const double> a, std::span<const double> b);

}  // namespace entrot
