#include "entrot/annealing.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "entrot/transport_lp.hpp"

namespace entrot {

void Schedule::validate() const {
  require(floor >= 0.0 && std::isfinite(floor), "schedule floor must be nonnegative");
  if (kind == Kind::Constant) {
    require(value > 0.0 && std::isfinite(value), "constant schedule needs lambda > 0");
  } else {
    require(exponent > 0.0 && std::isfinite(exponent), "power schedule needs exponent > 0");
    require(scale > 0.0 && std::isfinite(scale), "power schedule needs scale > 0");
  }
}

std::string Schedule::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (kind == Kind::Constant)
    os << "constant(" << value << ")";
  else
    os << "power(a=" << exponent << ", s=" << scale << ", floor=" << floor << ")";
  return os.str();
}

double schedule_value(const Schedule& s, std::size_t t) {
  s.validate();
  require(t >= 1, "schedule index starts at 1");
  const double raw = s.kind == Schedule::Kind::Constant
                         ? s.value
                         : s.scale * std::pow(static_cast<double>(t), -s.exponent);
  return std::max(raw, s.floor);
}

Potential annealed_step(const Problem& prob, const Potential& psi, double lambda_next) {
  return double_transform(prob, psi, lambda_next);
}

UnregularizedReference unregularized_reference(const Problem& prob, double tol) {
  const TransportSolution lp =
      solve_transport_lp(prob.cost().matrix(), prob.mu().weights(), prob.nu().weights());
  UnregularizedReference ref;
  ref.psi = mean_zero(Potential{lp.psi, Side::Y, Normalization::Raw}, prob.nu());
  ref.lower = semi_dual(prob, ref.psi, 0.0);
  ref.upper = std::max(lp.cost, ref.lower);
  ref.value = 0.5 * (ref.lower + ref.upper);
  require(ref.width() <= tol * std::max(1.0, prob.c_osc()), "bracket too wide");
  return ref;
}

AnnealedTrace run_annealed(const Problem& prob, const Schedule& schedule, std::size_t T) {
  require(T >= 1, "T must be at least 1");
  schedule.validate();
  const UnregularizedReference ref = unregularized_reference(prob);
  AnnealedTrace trace;
  trace.reference = ref.value;
  trace.reference_width = ref.width();
  trace.log_inv_min_nu = -std::log(prob.nu().min_weight());
  Potential psi = Potential::zeros(prob.nu().size(), Side::Y);
  trace.eta0 = ref.value - semi_dual(prob, psi, 0.0);
  trace.rows.reserve(T);
  for (std::size_t t = 1; t <= T; ++t) {
    const double lambda = schedule_value(schedule, t);
    psi = annealed_step(prob, psi, lambda);
    AnnealedRow row;
    row.t = t;
    row.lambda = lambda;
    row.E_reg = semi_dual(prob, psi, lambda);
    row.E_unreg = semi_dual(prob, psi, 0.0);
    row.eta = ref.value - row.E_unreg;
    trace.rows.push_back(row);
  }
  trace.psi_final = std::move(psi);
  return trace;
}

AnnealingCheck check_annealed(const AnnealedTrace& trace, const std::function<double(double)>& alpha_of_lambda) {
  AnnealingCheck chk;
  chk.strong_checked = static_cast<bool>(alpha_of_lambda);
  double eta_prev = trace.eta0;
  const double ref_slack = trace.reference_width;
  for (const AnnealedRow& r : trace.rows) {
    ++chk.steps;
    const double gap = r.E_reg - r.E_unreg;
    if (gap < -1e-10) ++chk.lower_violations;
    if (gap > r.lambda + 1e-10) ++chk.upper_violations;
    if (gap > r.lambda * trace.log_inv_min_nu + 1e-10) ++chk.upper_corrected_violations;
    chk.max_upper_ratio = std::max(chk.max_upper_ratio, gap / r.lambda);
    if (r.eta > eta_prev + r.lambda + 1e-9 + ref_slack) ++chk.recursion_violations;
    if (chk.strong_checked) {
      const double a = alpha_of_lambda(r.lambda);
      if (r.eta > (1.0 - 1.0 / a) * eta_prev + r.lambda + 1e-9 + ref_slack) ++chk.strong_violations;
    }
    eta_prev = r.eta;
  }
  return chk;
}

std::vector<CostCurvePoint> entropic_cost_curve(const Problem& prob, const std::vector<double>& lambdas) {
  const auto mu = prob.mu().weights();
  const auto nu = prob.nu().weights();
  const Matrix& c = prob.cost().matrix();
  double independent = 0.0;
  for (std::size_t i = 0; i < c.rows(); ++i)
    for (std::size_t j = 0; j < c.cols(); ++j) independent += mu[i] * nu[j] * c(i, j);

  std::vector<CostCurvePoint> out;
  out.reserve(lambdas.size());
  for (double lambda : lambdas) {
    const Problem p = prob.with_lambda(lambda);
    const SinkhornTrace tr = reference_solve(p, Potential::zeros(nu.size(), Side::Y));
    const Matrix g = plan(p, tr.psi_ref);
    CostCurvePoint pt;
    pt.lambda = lambda;
    pt.converged = tr.converged;
    pt.independent = independent;
    for (std::size_t i = 0; i < c.rows(); ++i)
      for (std::size_t j = 0; j < c.cols(); ++j) {
        const double v = g(i, j);
        pt.transport += c(i, j) * v;
        if (v > 0.0) pt.kl += v * std::log(v / (mu[i] * nu[j]));
      }
    pt.kl = std::max(pt.kl, 0.0);
    pt.h = pt.transport + lambda * pt.kl;
    out.push_back(pt);
  }
  return out;
}

CostCurveCheck check_cost_curve(const std::vector<CostCurvePoint>& curve, double slack) {
  CostCurveCheck chk;
  std::vector<CostCurvePoint> pts = curve;
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.lambda < b.lambda; });
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (pts[k].lambda * pts[k].kl > pts[k].independent - pts[k].transport + slack) chk.entropy_bound = false;
    if (k > 0 && pts[k].h < pts[k - 1].h - slack) chk.nondecreasing = false;
    if (k > 0 && k + 1 < pts.size()) {
      // Concavity: h(l_k) lies above the chord through its neighbours.
      const double l0 = pts[k - 1].lambda, l1 = pts[k].lambda, l2 = pts[k + 1].lambda;
      const double w = (l1 - l0) / (l2 - l0);
      if (pts[k].h < (1.0 - w) * pts[k - 1].h + w * pts[k + 1].h - slack) chk.concave = false;
    }
  }
  return chk;
}

DerivativeBound dE_dlambda_bound_check(const Problem& prob, const Potential& psi, double lambda, double h_step) {
  require(h_step > 0.0 && lambda - h_step > 0.0, "need 0 < h_step < lambda");
  DerivativeBound out;
  out.fd = (semi_dual(prob, psi, lambda + h_step) - semi_dual(prob, psi, lambda - h_step)) / (2.0 * h_step);
  out.bound = 6.0 * prob.c_osc() / lambda;
  const Potential centered = mean_zero(psi, prob.nu());
  const Matrix& c = prob.cost().matrix();
  const double cmin = c.min();
  double sup = 0.0;
  for (std::size_t i = 0; i < c.rows(); ++i)
    for (std::size_t j = 0; j < c.cols(); ++j) sup = std::max(sup, std::abs(centered.values[j] - (c(i, j) - cmin)));
  out.sup_norm_bound = 2.0 * sup / lambda;
  out.pass = std::abs(out.fd) <= out.bound + 1e-6;
  return out;
}

}  // namespace entrot
