#include "entrot/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace entrot {
namespace {

double a1_spread(const AssumptionTag& a, double c_inf) { return (c_inf + 0.5 * a.xi * a.r_x * a.r_x) * a.kappa; }

void check_inputs(double c_inf, double lambda) {
  require(c_inf >= 0.0 && std::isfinite(c_inf), "c_inf must be nonnegative");
  require(lambda > 0.0 && std::isfinite(lambda), "lambda must be positive");
}

double rel_err(double fd, double an) { return std::abs(fd - an) / std::max(std::abs(an), 1.0); }

}  // namespace

void AssumptionTag::validate() const {
  require(kappa >= 1.0, "kappa must be at least 1");
  require(xi >= 0.0 && r_x >= 0.0, "xi and r_x must be nonnegative");
}

std::string AssumptionTag::name() const {
  switch (kind) {
    case Kind::A1: return "A1";
    case Kind::A2: return "A2";
    case Kind::A3: return "A3";
  }
  return "?";
}

AssumptionTag assumption_from_string(const std::string& name, double kappa, double xi, double r_x) {
  if (name == "A1") return AssumptionTag::a1(kappa, xi, r_x);
  if (name == "A2") return AssumptionTag::a2();
  if (name == "A3") return AssumptionTag::a3();
  throw Error("unknown assumption tag: " + name);
}

double theorem_alpha(const AssumptionTag& a, double c_inf, double lambda) {
  a.validate();
  check_inputs(c_inf, lambda);
  const double r = c_inf / lambda;
  switch (a.kind) {
    case AssumptionTag::Kind::A1: return 176.0 * (1.0 + a1_spread(a, c_inf) / lambda + r * r);
    case AssumptionTag::Kind::A2: return 176.0 * (1.0 + r + r * r);
    case AssumptionTag::Kind::A3: return 176.0 * (1.0 + r);
  }
  return 0.0;
}

double improved_alpha(const AssumptionTag& a, double c_inf, double lambda) {
  a.validate();
  check_inputs(c_inf, lambda);
  switch (a.kind) {
    case AssumptionTag::Kind::A1: return 176.0 * (1.0 + a1_spread(a, c_inf) / lambda);
    case AssumptionTag::Kind::A2:
    case AssumptionTag::Kind::A3: return 176.0 * (1.0 + c_inf / lambda);
  }
  return 0.0;
}

VarianceConstants variance_bound_constants(const AssumptionTag& a, double c_inf, double lambda) {
  a.validate();
  check_inputs(c_inf, lambda);
  switch (a.kind) {
    case AssumptionTag::Kind::A1: return {11.0 * (a1_spread(a, c_inf) + lambda + c_inf * c_inf / lambda), 0.0};
    case AssumptionTag::Kind::A2: return {11.0 * (c_inf + lambda + c_inf * c_inf / lambda), 0.0};
    case AssumptionTag::Kind::A3: return {11.0 * (c_inf + lambda), 3.0 * c_inf * c_inf / lambda};
  }
  return {};
}

double contraction_from_bounds(double C1, double C2, double c_inf, double lambda) {
  require(C1 >= 0.0 && C2 >= 0.0, "variance constants must be nonnegative");
  check_inputs(c_inf, lambda);
  return std::max(16.0 * C1 / lambda, 4.0 * std::sqrt(C2 / lambda) + 28.0 * c_inf / (3.0 * lambda));
}

std::int64_t discrete_T(double C1, double alpha, double delta0, double min_weight) {
  require(C1 > 0.0 && delta0 > 0.0 && min_weight > 0.0, "discrete_T inputs must be positive");
  require(alpha > 1.0, "alpha must exceed 1");
  const double arg = 4.0 * C1 * delta0 / (min_weight * min_weight);
  if (arg <= 1.0) return 0;
  return static_cast<std::int64_t>(std::ceil(std::log(arg) / -std::log1p(-1.0 / alpha)));
}

void CheckReport::add(CheckRow row) {
  if (row.eligible && !row.pass) {
    ++failures;
    pass = false;
  }
  rows.push_back(row);
}

CheckRow verify_one_step(double delta_t, double delta_next, double var_t, double c_inf, double lambda,
                         double residual) {
  const double drop = std::max(delta_t - delta_next, 0.0);
  CheckRow r;
  r.lhs = delta_t;
  r.rhs = 2.0 * std::sqrt(std::max(var_t, 0.0) * drop / lambda) + (14.0 * c_inf / 3.0) * drop / lambda;
  r.slack = 1e-9 + 2.0 * residual;
  r.pass = r.lhs <= r.rhs + r.slack;
  return r;
}

CheckReport verify_one_step(const SinkhornTrace& trace, double c_inf, double lambda) {
  CheckReport rep;
  rep.name = "one_step_improvement";
  rep.anchor = "Prop one-step-improvement";
  for (std::size_t k = 0; k + 1 < trace.rows.size(); ++k) {
    const TraceRow& a = trace.rows[k];
    CheckRow r = verify_one_step(a.delta, trace.rows[k + 1].delta, a.var_gap, c_inf, lambda, trace.residual);
    r.t = a.t;
    rep.add(r);
  }
  return rep;
}

CheckRow verify_variance_subopt(double delta_t, double delta_next, double var_t, const VarianceConstants& k,
                                double residual) {
  CheckRow r;
  r.lhs = var_t;
  r.rhs = k.C1 * delta_t + k.C2 * std::max(delta_t - delta_next, 0.0);
  r.slack = 1e-9 + (k.C1 + k.C2) * residual;
  r.pass = r.lhs <= r.rhs + r.slack;
  return r;
}

CheckReport verify_variance_subopt(const SinkhornTrace& trace, const VarianceConstants& k, std::size_t t_min) {
  CheckReport rep;
  rep.name = "variance_subopt";
  rep.anchor = "Prop bound-variance-subopt";
  for (std::size_t i = 0; i + 1 < trace.rows.size(); ++i) {
    const TraceRow& a = trace.rows[i];
    CheckRow r = verify_variance_subopt(a.delta, trace.rows[i + 1].delta, a.var_gap, k, trace.residual);
    r.t = a.t;
    r.eligible = a.t >= t_min;
    rep.add(r);
  }
  return rep;
}

ContractionReport verify_contraction(const std::vector<double>& deltas, double alpha, double residual) {
  require(alpha > 1.0, "alpha must exceed 1");
  ContractionReport rep;
  rep.alpha = alpha;
  rep.bound = 1.0 - 1.0 / alpha;
  for (std::size_t k = 0; k + 1 < deltas.size(); ++k) {
    const bool ok = deltas[k] > 100.0 * residual && deltas[k] > 0.0;
    const double ratio = ok ? deltas[k + 1] / deltas[k] : std::numeric_limits<double>::quiet_NaN();
    const bool pass = !ok || deltas[k + 1] <= rep.bound * deltas[k] + residual;
    rep.t.push_back(k);
    rep.ratio.push_back(ratio);
    rep.eligible.push_back(ok);
    rep.pass_step.push_back(pass);
    if (ok) rep.max_ratio = std::max(rep.max_ratio, ratio);
    if (!pass) ++rep.violations;
  }
  rep.pass = rep.violations == 0;
  return rep;
}

ContractionReport verify_contraction(const SinkhornTrace& trace, double alpha) {
  std::vector<double> deltas;
  deltas.reserve(trace.rows.size());
  for (const TraceRow& r : trace.rows) deltas.push_back(r.delta);
  ContractionReport rep = verify_contraction(deltas, alpha, trace.residual);
  for (std::size_t k = 0; k < rep.t.size(); ++k) rep.t[k] = trace.rows[k].t;
  return rep;
}

CheckRow verify_variance_comparison(const DiscreteMeasure& rho, const DiscreteMeasure& pi, std::span<const double> f,
                                    double slack) {
  require(rho.same_support(pi), "mismatched supports");
  require(f.size() == rho.size(), "test function length does not match support");
  const auto [lo, hi] = std::minmax_element(f.begin(), f.end());
  const double range = *hi - *lo;
  const double kl = std::min(kl_divergence(rho.weights(), pi.weights()), kl_divergence(pi.weights(), rho.weights()));
  CheckRow r;
  // Written as lhs <= rhs: Var_pi/2 - range^2 KL <= Var_rho.
  r.lhs = 0.5 * variance(pi, f) - (range > 0.0 ? range * range * kl : 0.0);
  r.rhs = variance(rho, f);
  r.slack = slack;
  r.pass = r.lhs <= r.rhs + slack;
  return r;
}

ConvexityResult verify_transform_convexity(const Problem& prob, const Potential& psi0, const Potential& psi1, double a,
                                           double slack) {
  require(a >= 0.0 && a <= 1.0, "interpolation weight must lie in [0, 1]");
  require(psi0.size() == psi1.size(), "potentials differ in length");
  Potential mid = psi0;
  for (std::size_t j = 0; j < mid.size(); ++j) mid.values[j] = (1.0 - a) * psi0.values[j] + a * psi1.values[j];
  const Potential lhs = double_transform(prob, mid);
  const Potential t0 = double_transform(prob, psi0);
  const Potential t1 = double_transform(prob, psi1);
  ConvexityResult out;
  out.max_violation = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < lhs.size(); ++j) {
    const double rhs = (1.0 - a) * t0.values[j] + a * t1.values[j];
    out.max_violation = std::max(out.max_violation, lhs.values[j] - rhs);
  }
  out.pass = out.max_violation <= slack;
  return out;
}

CheckRow verify_local_approximation(const Problem& prob, const Potential& psi, std::span<const double> v, double s,
                                    double slack) {
  const SecondMarginal sm = second_marginal(prob, psi);
  const auto nu = prob.nu().weights();
  const auto nu_psi = sm.nu_psi.weights();
  double lin = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) lin += (nu[j] - nu_psi[j]) * v[j];
  double ev = 0.0;
  for (std::size_t i = 0; i < sm.family.size(); ++i) ev += prob.mu().weight(i) * variance(sm.family.row(i), v);
  CheckRow r;
  r.lhs = semi_dual(prob, axpy(psi, s, v));
  r.rhs = semi_dual(prob, psi) + s * lin - s * s / (4.0 * prob.lambda()) * ev;
  r.slack = slack;
  r.pass = r.lhs <= r.rhs + slack;
  return r;
}

FdAudit fd_derivative_audit(const Problem& prob, const Potential& psi, std::span<const double> v, double h) {
  require(h > 0.0, "step must be positive");
  const Potential tp = c_transform(prob, axpy(psi, h, v));
  const Potential t0 = c_transform(prob, psi);
  const Potential tm = c_transform(prob, axpy(psi, -h, v));
  const ConditionalFamily fam = conditionals(prob, psi);
  FdAudit out;
  out.max_second = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < fam.size(); ++i) {
    const double first = -expectation(fam.row(i), v);
    const double second = -variance(fam.row(i), v) / prob.lambda();
    const double fd1 = (tp.values[i] - tm.values[i]) / (2.0 * h);
    const double fd2 = (tp.values[i] - 2.0 * t0.values[i] + tm.values[i]) / (h * h);
    out.max_rel_first = std::max(out.max_rel_first, rel_err(fd1, first));
    out.max_rel_second = std::max(out.max_rel_second, rel_err(fd2, second));
    out.max_second = std::max(out.max_second, second);
  }
  out.pass = out.max_rel_first <= 1e-5 && out.max_rel_second <= 1e-4 && out.max_second <= 0.0;
  return out;
}

KFdAudit fd_K_audit(const Problem& prob, const Potential& psi, std::span<const double> v, double h) {
  require(h > 0.0, "step must be positive");
  KFdAudit out;
  out.analytic = K_directional_derivatives(prob, psi, v, 0.0);
  const double kp = entropic_kantorovich(prob, axpy(psi, h, v));
  const double k0 = entropic_kantorovich(prob, psi);
  const double km = entropic_kantorovich(prob, axpy(psi, -h, v));
  out.fd.first = (kp - km) / (2.0 * h);
  out.fd.second = (kp - 2.0 * k0 + km) / (h * h);
  out.rel_first = rel_err(out.fd.first, out.analytic.first);
  out.rel_second = rel_err(out.fd.second, out.analytic.second);
  return out;
}

}  // namespace entrot
