#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "entrot/sinkhorn.hpp"

namespace entrot {

/// lambda_t for t >= 1: constant, or s * t^{-a}; clamped below at floor.
struct Schedule {
  enum class Kind { Constant, Power };
  Kind kind = Kind::Constant;
  double value = 1.0;     ///< constant lambda
  double exponent = 0.5;  ///< a
  double scale = 1.0;     ///< s
  double floor = 0.0;

  static Schedule constant(double lambda) { return {Kind::Constant, lambda, 0.0, 1.0, 0.0}; }
  static Schedule power(double a, double s = 1.0, double floor = 0.0) { return {Kind::Power, 0.0, a, s, floor}; }

  void validate() const;
  std::string describe() const;
};

double schedule_value(const Schedule& s, std::size_t t);

/// psi_{t+1} = psi_t^{cc, lambda_next}; the problem's own lambda is ignored.
Potential annealed_step(const Problem& prob, const Potential& psi, double lambda_next);

/// E(psi*_0, 0), the unregularized semi-dual optimum, with a certified
/// bracket lower <= value <= upper.
struct UnregularizedReference {
  double value = 0.0;
  double lower = 0.0;  ///< E(psi, 0) for the returned dual potential
  double upper = 0.0;  ///< transport cost of a primal coupling
  Potential psi;
  double width() const { return upper - lower; }
};

UnregularizedReference unregularized_reference(const Problem& prob, double tol = 1e-9);

struct AnnealedRow {
  std::size_t t = 0;
  double lambda = 0.0;
  double E_reg = 0.0;    ///< E(psi_t, lambda_t)
  double E_unreg = 0.0;  ///< E(psi_t, 0)
  double eta = 0.0;      ///< E(psi*_0, 0) - E(psi_t, 0)
};

struct AnnealedTrace {
  std::vector<AnnealedRow> rows;  ///< t = 1..T
  double reference = 0.0;         ///< E(psi*_0, 0)
  double reference_width = 0.0;
  double eta0 = 0.0;              ///< gap of psi_0 = 0
  double log_inv_min_nu = 0.0;    ///< log(1 / min_j nu_j)
  Potential psi_final;
};

AnnealedTrace run_annealed(const Problem& prob, const Schedule& schedule, std::size_t T);

/// Per-step checks over an annealed trace. `upper` is the stated bound
/// E(psi_t, lambda_t) - E(psi_t, 0) <= lambda_t; `upper_corrected` replaces
/// lambda_t by lambda_t log(1/min nu), which is what the soft-min actually
/// guarantees on a discrete nu.
struct AnnealingCheck {
  std::size_t steps = 0;
  std::size_t lower_violations = 0;
  std::size_t upper_violations = 0;
  std::size_t upper_corrected_violations = 0;
  std::size_t recursion_violations = 0;  ///< eta_{t+1} <= eta_t + lambda_{t+1}
  std::size_t strong_violations = 0;     ///< eta_{t+1} <= (1 - 1/alpha) eta_t + lambda_{t+1}
  double max_upper_ratio = 0.0;          ///< max (E_reg - E_unreg) / lambda_t
  bool strong_checked = false;
};

AnnealingCheck check_annealed(const AnnealedTrace& trace,
                              const std::function<double(double)>& alpha_of_lambda = {});

struct CostCurvePoint {
  double lambda = 0.0;
  double h = 0.0;   ///< <c, gamma*> + lambda KL(gamma* | mu x nu)
  double kl = 0.0;  ///< KL(gamma* | mu x nu)
  double transport = 0.0;     ///< <c, gamma*>
  double independent = 0.0;   ///< <c, mu x nu>
  bool converged = false;
};

std::vector<CostCurvePoint> entropic_cost_curve(const Problem& prob, const std::vector<double>& lambdas);

struct CostCurveCheck {
  bool nondecreasing = true;
  bool concave = true;
  bool entropy_bound = true;  ///< lambda KL <= <c, mu x nu - gamma*>
};

CostCurveCheck check_cost_curve(const std::vector<CostCurvePoint>& curve, double slack = 1e-9);

struct DerivativeBound {
  double fd = 0.0;
  double bound = 0.0;          ///< 6 c_osc / lambda
  double sup_norm_bound = 0.0; ///< 2 ||psi - c||_inf / lambda after centering
  bool pass = false;
};

/// Central difference of lambda -> E(psi, lambda) against 6 c_osc / lambda.
/// The sup-norm variant centers psi to mean zero under nu and c to min zero.
DerivativeBound dE_dlambda_bound_check(const Problem& prob, const Potential& psi, double lambda, double h_step);

}  // namespace entrot
