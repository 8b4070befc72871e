#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "entrot/common.hpp"
#include "entrot/cost.hpp"
#include "entrot/measure.hpp"

namespace entrot {

enum class Side { X, Y };
enum class Normalization { Raw, MeanZero };

/// A dual potential: one value per support point of mu (Side::X) or nu (Side::Y).
struct Potential {
  Vector values;
  Side side = Side::Y;
  Normalization normalization = Normalization::Raw;

  static Potential zeros(std::size_t n, Side side) { return {Vector(n, 0.0), side, Normalization::Raw}; }

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t k) const { return values[k]; }
};

/// Copy shifted to have zero mean under m.
Potential mean_zero(const Potential& p, const DiscreteMeasure& m);

/// An entropic transport instance. Measures and cost are shared immutably so
/// re-parameterizing lambda is cheap.
class Problem {
 public:
  Problem(DiscreteMeasure mu, DiscreteMeasure nu, CostModel cost, double lambda);

  const DiscreteMeasure& mu() const { return *mu_; }
  const DiscreteMeasure& nu() const { return *nu_; }
  const CostModel& cost() const { return *cost_; }
  double lambda() const { return lambda_; }
  double c_osc() const { return cost_->c_osc(); }

  /// Same measures and cost at another regularization.
  Problem with_lambda(double lambda) const;

 private:
  Problem(std::shared_ptr<const DiscreteMeasure> mu, std::shared_ptr<const DiscreteMeasure> nu,
          std::shared_ptr<const CostModel> cost, double lambda);

  std::shared_ptr<const DiscreteMeasure> mu_;
  std::shared_ptr<const DiscreteMeasure> nu_;
  std::shared_ptr<const CostModel> cost_;
  double lambda_;
};

/// psi^{c,lambda}(x_i) = -lambda log sum_j nu_j exp((psi_j - c_ij) / lambda).
Potential c_transform(const Problem& prob, const Potential& psi);
Potential c_transform(const Problem& prob, const Potential& psi, double lambda);

/// phi^{c,lambda}(y_j) = -lambda log sum_i mu_i exp((phi_i - c_ij) / lambda).
Potential c_transform_dual(const Problem& prob, const Potential& phi);
Potential c_transform_dual(const Problem& prob, const Potential& phi, double lambda);

/// (psi^{c,lambda})^{c,lambda}: one full Sinkhorn update of psi.
Potential double_transform(const Problem& prob, const Potential& psi);
Potential double_transform(const Problem& prob, const Potential& psi, double lambda);

/// Unregularized c-transform: min_j c_ij - psi_j over atoms of nu.
Potential hard_c_transform(const Problem& prob, const Potential& psi);

/// E(psi) = <psi^{c,lambda}, mu> + <psi, nu>. A lambda override of zero
/// evaluates the unregularized semi-dual through hard_c_transform.
double semi_dual(const Problem& prob, const Potential& psi, std::optional<double> lambda_override = {});

/// K(psi) = <psi^{c,lambda}, mu>.
double entropic_kantorovich(const Problem& prob, const Potential& psi);

/// sum_ij mu_i nu_j exp((phi_i + psi_j - c_ij) / lambda), via a shifted log-sum-exp.
double exponential_mass(const Problem& prob, const Potential& phi, const Potential& psi);

/// F(phi, psi) = <phi, mu> + <psi, nu> + lambda (1 - exponential_mass).
double dual_value(const Problem& prob, const Potential& phi, const Potential& psi);

/// gamma[psi]_ij = mu_i nu_j exp((psi^{c,lambda}_i + psi_j - c_ij) / lambda).
Matrix plan(const Problem& prob, const Potential& psi);

/// Row i is the conditional nu_{x_i}[psi], a probability vector over spt(nu).
struct ConditionalFamily {
  Matrix rows;

  std::size_t size() const { return rows.rows(); }
  std::span<const double> row(std::size_t i) const { return rows.row(i); }
};

ConditionalFamily conditionals(const Problem& prob, const Potential& psi);

/// mu-mixture of the conditional rows, weighted by `mixing` (length |X|).
Vector mixture(const ConditionalFamily& family, std::span<const double> mixing);

struct SecondMarginal {
  DiscreteMeasure nu_psi;
  ConditionalFamily family;
};

SecondMarginal second_marginal(const Problem& prob, const Potential& psi);

/// KL(nu | nu[psi]) = (1/lambda) <psi^{cc,lambda} - psi, nu>.
double kl_nu_gap(const Problem& prob, const Potential& psi);

struct StepResult {
  Potential phi_half;
  Potential psi_next;
};

/// phi_{t+1/2} = psi_t^{c,lambda}, psi_{t+1} = phi_{t+1/2}^{c,lambda}.
StepResult step(const Problem& prob, const Potential& psi);

struct TraceRow {
  std::size_t t = 0;
  double lambda = 0.0;
  double E = 0.0;        ///< semi-dual value at psi_t
  double delta = 0.0;    ///< max(E(psi_ref) - E_t, 0)
  double kl = 0.0;       ///< KL(nu | nu[psi_t])
  double var_gap = 0.0;  ///< Var_nu(psi_ref - psi_t)
  double osc = 0.0;      ///< ||psi_ref - psi_t||_osc
};

struct SinkhornTrace {
  std::vector<TraceRow> rows;
  Potential psi_ref;       ///< final iterate, mean-zero under nu
  double E_ref = 0.0;      ///< E(psi_ref)
  double residual = 0.0;   ///< lambda * KL(nu | nu[psi_final])
  bool converged = false;
  double c_osc = 0.0;

  std::size_t iterations() const { return rows.empty() ? 0 : rows.back().t; }
};

/// Runs Sinkhorn from psi0 until lambda * KL(nu | nu[psi_t]) <= tol or
/// max_iters updates have been applied. Rows t = 0..T are recorded; a second
/// deterministic pass fills delta, var_gap and osc against psi_ref.
SinkhornTrace solve(const Problem& prob, const Potential& psi0, std::size_t max_iters, double tol);

/// High-precision solve used as the stand-in for the exact maximizer:
/// tol = 1e-13 max(1, c_osc), at most 10^6 updates.
SinkhornTrace reference_solve(const Problem& prob, const Potential& psi0);

inline constexpr std::size_t kReferenceMaxIters = 1000000;
double reference_tolerance(const Problem& prob);

struct DirectionalDerivatives {
  double first = 0.0;
  double second = 0.0;
};

/// First and second derivatives of eps -> K(psi + eps v) at eps, from the
/// conditionals at psi + eps v.
DirectionalDerivatives K_directional_derivatives(const Problem& prob, const Potential& psi,
                                                 std::span<const double> v, double eps = 0.0);

/// Potential psi + s v (same side).
Potential axpy(const Potential& psi, double s, std::span<const double> v);

}  // namespace entrot
