#include "entrot/stats.hpp"

#include <algorithm>
#include <cmath>

#include "entrot/parallel.hpp"
#include "entrot/rng.hpp"

namespace entrot {
namespace {

double sup_abs(std::span<const double> f) { return f.empty() ? 0.0 : max_abs(f); }

}  // namespace

void ReplicationPlan::validate(const Problem& prob) const {
  require(N >= 1 && M >= 1, "replication plan needs N >= 1 and M >= 1");
  require(f.size() == prob.nu().size(), "test function must live on spt(nu)");
  for (double v : f) require(std::isfinite(v), "test function must be finite");
  require(psi.size() == prob.nu().size() && psi.side == Side::Y, "potential must live on spt(nu)");
}

DiscreteMeasure empirical_mixture(const Problem& prob, const Potential& psi, const DiscreteMeasure& muN) {
  std::vector<std::size_t> idx(muN.size());
  for (std::size_t k = 0; k < muN.size(); ++k) {
    const auto i = prob.mu().index_of(muN.point(k));
    require(i.has_value(), "sample point outside spt(mu)");
    idx[k] = *i;
  }
  const ConditionalFamily fam = conditionals(prob, psi);
  Vector w(prob.nu().size(), 0.0);
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const auto row = fam.row(idx[k]);
    for (std::size_t j = 0; j < w.size(); ++j) w[j] += muN.weight(k) * row[j];
  }
  return prob.nu().reweighted(std::move(w));
}

Vector replicate_variances(const Problem& prob, const ReplicationPlan& plan) {
  plan.validate(prob);
  const ConditionalFamily fam = conditionals(prob, plan.psi);
  const std::size_t n = prob.mu().size();
  // E_{nu_x} f and E_{nu_x} f^2 per atom; Var_{nu^N} f follows from their sample means.
  // f is centered first; variance is shift invariant and a constant f then
  // gives exactly zero.
  const double shift = expectation(prob.nu(), plan.f);
  Vector m1(n), m2(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = fam.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) {
      const double g = plan.f[j] - shift;
      m1[i] += row[j] * g;
      m2[i] += row[j] * g * g;
    }
  }
  Vector out(plan.M);
  const double inv_n = 1.0 / static_cast<double>(plan.N);
  parallel_for(plan.M, [&](std::size_t b, std::size_t e) {
    for (std::size_t m = b; m < e; ++m) {
      double s1 = 0.0, s2 = 0.0;
      for (std::size_t i : sample_indices(prob.mu().weights(), plan.N, derive_seed(plan.seed, m))) {
        s1 += m1[i];
        s2 += m2[i];
      }
      s1 *= inv_n;
      s2 *= inv_n;
      out[m] = std::max(s2 - s1 * s1, 0.0);
    }
  }, 8);
  return out;
}

MonteCarloReport mc_variance_gap(const Problem& prob, const ReplicationPlan& plan) {
  const Vector vars = replicate_variances(prob, plan);
  const SecondMarginal sm = second_marginal(prob, plan.psi);
  MonteCarloReport r;
  r.N = plan.N;
  r.M = plan.M;
  r.var_exact = variance(sm.nu_psi, plan.f);
  r.f_sup = sup_abs(plan.f);
  for (double v : vars) r.mean_abs_gap += std::abs(v - r.var_exact);
  r.mean_abs_gap /= static_cast<double>(vars.size());
  r.bound = 8.0 * r.f_sup * std::sqrt(r.var_exact) / std::sqrt(static_cast<double>(plan.N));
  r.slack_factor = 1.0 + 3.0 / std::sqrt(static_cast<double>(plan.M));
  r.pass = r.mean_abs_gap <= r.bound * r.slack_factor;
  return r;
}

double epsilon_for_tail_bound(std::size_t N, double f_sup, double b) {
  require(b > 0.0 && b <= 2.0, "tail level must lie in (0, 2]");
  return std::sqrt(32.0 * std::pow(f_sup, 4) * std::log(2.0 / b) / static_cast<double>(N));
}

ConcentrationReport concentration_coverage(const Problem& prob, const ReplicationPlan& plan,
                                           const std::vector<double>& epsilons, double eta) {
  require(eta > 0.0 && eta < 1.0, "eta must lie in (0, 1)");
  const Vector vars = replicate_variances(prob, plan);
  const double M = static_cast<double>(plan.M);
  const double N = static_cast<double>(plan.N);
  ConcentrationReport r;
  r.N = plan.N;
  r.M = plan.M;
  r.f_sup = sup_abs(plan.f);
  for (double v : vars) r.center += v;
  r.center /= M;
  const double f4 = std::pow(r.f_sup, 4);
  auto slack = [&](double b) {
    const double bc = std::clamp(b, 0.0, 1.0);
    return 3.0 * std::sqrt(bc * (1.0 - bc) / M) + 1.0 / M;
  };
  r.pass = true;
  for (double eps : epsilons) {
    require(eps >= 0.0, "epsilon must be nonnegative");
    TailRow row;
    row.epsilon = eps;
    std::size_t hits = 0;
    for (double v : vars) hits += std::abs(v - r.center) >= eps;
    row.empirical_tail = static_cast<double>(hits) / M;
    row.bound = f4 > 0.0 ? 2.0 * std::exp(-eps * eps * N / (32.0 * f4)) : (eps > 0.0 ? 0.0 : 2.0);
    row.slack = slack(row.bound);
    row.pass = row.empirical_tail <= row.bound + row.slack;
    r.pass = r.pass && row.pass;
    r.tails.push_back(row);
  }
  HighProbabilityRow& hp = r.high_probability;
  hp.eta = eta;
  hp.threshold = r.center + 8.0 * r.f_sup * r.f_sup / std::sqrt(N) * std::log(1.0 / eta);
  std::size_t above = 0;
  for (double v : vars) above += v > hp.threshold;
  hp.fraction = static_cast<double>(above) / M;
  hp.slack = slack(eta);
  hp.pass = hp.fraction <= eta + hp.slack;
  r.pass = r.pass && hp.pass;
  return r;
}

DominationReport conditional_variance_dominations(const Problem& prob, const Potential& psi,
                                                  std::span<const double> f, double slack) {
  require(f.size() == prob.nu().size(), "test function must live on spt(nu)");
  const SecondMarginal sm = second_marginal(prob, psi);
  const std::size_t n = prob.mu().size();
  Vector m1(n), m2(n), sq(n), cv(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = sm.family.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) {
      m1[i] += row[j] * f[j];
      m2[i] += row[j] * f[j] * f[j];
    }
    sq[i] = m1[i] * m1[i];
    cv[i] = variance(row, f);
  }
  const auto mu = prob.mu().weights();
  const double var = variance(sm.nu_psi, f);
  const double f2 = std::pow(sup_abs(f), 2);
  DominationReport r;
  r.mean = {variance(mu, m1), var, false};
  r.second_moment = {variance(mu, m2), 2.0 * f2 * var, false};
  r.squared_mean = {variance(mu, sq), 2.0 * f2 * var, false};
  r.second_moment_4 = {r.second_moment.lhs, 4.0 * f2 * var, false};
  r.squared_mean_4 = {r.squared_mean.lhs, 4.0 * f2 * var, false};
  for (Domination* d : {&r.mean, &r.second_moment, &r.squared_mean, &r.second_moment_4, &r.squared_mean_4})
    d->pass = d->lhs <= d->rhs + slack;
  r.total_variance_error = std::abs(var - r.mean.lhs - expectation(mu, cv));
  return r;
}

}  // namespace entrot
