#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "entrot/sinkhorn.hpp"

namespace entrot {

/// Which hypothesis of the convergence theorem an instance is declared to
/// satisfy. Only A1 carries constants.
struct AssumptionTag {
  enum class Kind { A1, A2, A3 };
  Kind kind = Kind::A2;
  double kappa = 1.0;  ///< density ratio M/m of mu
  double xi = 0.0;     ///< semi-concavity of c in x
  double r_x = 0.0;    ///< radius of spt(mu)

  static AssumptionTag a1(double kappa, double xi, double r_x) { return {Kind::A1, kappa, xi, r_x}; }
  static AssumptionTag a2() { return {Kind::A2, 1.0, 0.0, 0.0}; }
  static AssumptionTag a3() { return {Kind::A3, 1.0, 0.0, 0.0}; }

  void validate() const;
  std::string name() const;
};

AssumptionTag assumption_from_string(const std::string& name, double kappa = 1.0, double xi = 0.0, double r_x = 0.0);

/// Contraction constant alpha of the convergence theorem.
double theorem_alpha(const AssumptionTag& a, double c_inf, double lambda);

/// Improved alpha valid after enough iterations (A1, A2); A3 is unchanged.
double improved_alpha(const AssumptionTag& a, double c_inf, double lambda);

struct VarianceConstants {
  double C1 = 0.0;
  double C2 = 0.0;
};

/// Var_nu(psi* - psi_t) <= C1 delta_t + C2 (delta_t - delta_{t+1}).
VarianceConstants variance_bound_constants(const AssumptionTag& a, double c_inf, double lambda);

/// alpha = max{16 C1 / lambda, 4 sqrt(C2 / lambda) + 28 c_inf / (3 lambda)}.
double contraction_from_bounds(double C1, double C2, double c_inf, double lambda);

/// ceil(log(4 C1 delta0 / min_weight^2) / -log(1 - 1/alpha)), or 0 when the
/// log argument is at most 1.
std::int64_t discrete_T(double C1, double alpha, double delta0, double min_weight);

/// One checked inequality lhs <= rhs (+ slack).
struct CheckRow {
  std::size_t t = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool eligible = true;
  bool pass = true;
};

struct CheckReport {
  std::string name;
  std::string anchor;  ///< the statement being checked, e.g. "Prop one-step-improvement"
  std::vector<CheckRow> rows;
  std::size_t failures = 0;
  bool pass = true;
  std::string note;

  void add(CheckRow row);
};

/// delta_t <= 2 sqrt(Var (delta_t - delta_{t+1}) / lambda) + (14 c_inf / 3)(delta_t - delta_{t+1}) / lambda.
CheckRow verify_one_step(double delta_t, double delta_next, double var_t, double c_inf, double lambda,
                         double residual);
CheckReport verify_one_step(const SinkhornTrace& trace, double c_inf, double lambda);

/// Var_nu(psi* - psi_t) <= C1 delta_t + C2 (delta_t - delta_{t+1}).
CheckRow verify_variance_subopt(double delta_t, double delta_next, double var_t, const VarianceConstants& k,
                                double residual);
/// Rows with t < t_min are skipped (used for the large-t regime).
CheckReport verify_variance_subopt(const SinkhornTrace& trace, const VarianceConstants& k, std::size_t t_min = 0);

struct ContractionReport {
  double alpha = 0.0;
  double bound = 0.0;  ///< 1 - 1/alpha
  double C1 = 0.0, C2 = 0.0;
  std::int64_t T = 0;
  std::vector<std::size_t> t;
  std::vector<double> ratio;  ///< delta_{t+1} / delta_t, NaN for ineligible steps
  std::vector<char> eligible;
  std::vector<char> pass_step;
  std::size_t violations = 0;
  double max_ratio = 0.0;
  bool pass = true;
};

/// delta_{t+1} <= (1 - 1/alpha) delta_t on every step with delta_t > 100 residual.
ContractionReport verify_contraction(const SinkhornTrace& trace, double alpha);

/// Same check on a bare gap sequence (e.g. the analytic Gaussian series).
ContractionReport verify_contraction(const std::vector<double>& deltas, double alpha, double residual = 0.0);

/// Var_rho(f) >= Var_pi(f)/2 - (b - a)^2 min(KL(rho|pi), KL(pi|rho)).
CheckRow verify_variance_comparison(const DiscreteMeasure& rho, const DiscreteMeasure& pi, std::span<const double> f,
                                    double slack = 1e-10);

struct ConvexityResult {
  double max_violation = 0.0;  ///< max_y lhs(y) - rhs(y)
  bool pass = true;
};

/// ((1-a) psi0 + a psi1)^{cc} <= (1-a) psi0^{cc} + a psi1^{cc} at every y.
ConvexityResult verify_transform_convexity(const Problem& prob, const Potential& psi0, const Potential& psi1, double a,
                                           double slack = 1e-10);

/// E(psi + s v) <= E(psi) + s <nu - nu[psi], v> - (s^2 / (4 lambda)) E_mu Var_{nu_x}(v).
CheckRow verify_local_approximation(const Problem& prob, const Potential& psi, std::span<const double> v, double s,
                                    double slack = 1e-10);

struct FdAudit {
  double max_rel_first = 0.0;
  double max_rel_second = 0.0;
  double max_second = 0.0;  ///< largest analytic second derivative (should be <= 0)
  bool pass = false;
};

/// Central differences of eps -> (psi + eps v)^{c,lambda}(x_i) at every i
/// against -<v, nu_x> and -Var_{nu_x}(v)/lambda. Relative errors use the
/// denominator max(|analytic|, 1).
FdAudit fd_derivative_audit(const Problem& prob, const Potential& psi, std::span<const double> v, double h = 1e-4);

struct KFdAudit {
  DirectionalDerivatives analytic;
  DirectionalDerivatives fd;
  double rel_first = 0.0;
  double rel_second = 0.0;
};

/// Same audit for K(psi + eps v) = <(psi + eps v)^{c,lambda}, mu> at eps = 0.
KFdAudit fd_K_audit(const Problem& prob, const Potential& psi, std::span<const double> v, double h = 1e-4);

}  // namespace entrot
