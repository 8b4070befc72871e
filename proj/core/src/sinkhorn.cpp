#include "entrot/sinkhorn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "entrot/parallel.hpp"

namespace entrot {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_side(const Problem& prob, const Potential& p, Side side) {
  const std::size_t n = side == Side::X ? prob.mu().size() : prob.nu().size();
  require(p.side == side, side == Side::X ? "potential must live on spt(mu)" : "potential must live on spt(nu)");
  require(p.size() == n, "potential length does not match support size");
}

void check_lambda(double lambda) { require(lambda > 0.0 && std::isfinite(lambda), "lambda must be positive"); }

// Softmax of a_j = (psi_j - c_ij)/lambda + log nu_j for one row; returns the
// log normalizer m + log s.
double row_log_mass(const Matrix& c, std::size_t i, std::span<const double> psi, std::span<const double> log_w,
                    double lambda) {
  const auto row = c.row(i);
  double m = kNegInf;
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (log_w[j] == kNegInf) continue;
    m = std::max(m, (psi[j] - row[j]) / lambda + log_w[j]);
  }
  double s = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (log_w[j] == kNegInf) continue;
    s += std::exp((psi[j] - row[j]) / lambda + log_w[j] - m);
  }
  return m + std::log(s);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

}  // namespace

Potential mean_zero(const Potential& p, const DiscreteMeasure& m) {
  require(p.size() == m.size(), "potential length does not match support size");
  const double e = expectation(m, p.values);
  Potential out = p;
  for (double& v : out.values) v -= e;
  out.normalization = Normalization::MeanZero;
  return out;
}

Problem::Problem(DiscreteMeasure mu, DiscreteMeasure nu, CostModel cost, double lambda)
    : Problem(std::make_shared<const DiscreteMeasure>(std::move(mu)),
              std::make_shared<const DiscreteMeasure>(std::move(nu)),
              std::make_shared<const CostModel>(std::move(cost)), lambda) {}

Problem::Problem(std::shared_ptr<const DiscreteMeasure> mu, std::shared_ptr<const DiscreteMeasure> nu,
                 std::shared_ptr<const CostModel> cost, double lambda)
    : mu_(std::move(mu)), nu_(std::move(nu)), cost_(std::move(cost)), lambda_(lambda) {
  check_lambda(lambda_);
  require(cost_->rows() == mu_->size() && cost_->cols() == nu_->size(), "cost dimensions do not match supports");
}

Problem Problem::with_lambda(double lambda) const { return Problem(mu_, nu_, cost_, lambda); }

Potential c_transform(const Problem& prob, const Potential& psi) { return c_transform(prob, psi, prob.lambda()); }

Potential c_transform(const Problem& prob, const Potential& psi, double lambda) {
  check_side(prob, psi, Side::Y);
  check_lambda(lambda);
  const Matrix& c = prob.cost().matrix();
  const auto log_w = prob.nu().log_weights();
  Potential out{Vector(prob.mu().size()), Side::X, Normalization::Raw};
  parallel_for(out.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) out.values[i] = -lambda * row_log_mass(c, i, psi.values, log_w, lambda);
  }, 16);
  return out;
}

Potential c_transform_dual(const Problem& prob, const Potential& phi) {
  return c_transform_dual(prob, phi, prob.lambda());
}

Potential c_transform_dual(const Problem& prob, const Potential& phi, double lambda) {
  check_side(prob, phi, Side::X);
  check_lambda(lambda);
  const Matrix& c = prob.cost().matrix();
  const auto log_w = prob.mu().log_weights();
  const std::size_t nx = c.rows();
  const std::size_t ny = c.cols();
  Potential out{Vector(ny), Side::Y, Normalization::Raw};
  // Column-wise reduction; every column accumulates over i in ascending order.
  parallel_for(ny, [&](std::size_t b, std::size_t e) {
    std::vector<double> m(e - b, kNegInf), s(e - b, 0.0);
    for (std::size_t i = 0; i < nx; ++i) {
      if (log_w[i] == kNegInf) continue;
      const auto row = c.row(i);
      const double base = phi.values[i] / lambda + log_w[i];
      for (std::size_t j = b; j < e; ++j) m[j - b] = std::max(m[j - b], base - row[j] / lambda);
    }
    for (std::size_t i = 0; i < nx; ++i) {
      if (log_w[i] == kNegInf) continue;
      const auto row = c.row(i);
      const double base = phi.values[i] / lambda + log_w[i];
      for (std::size_t j = b; j < e; ++j) s[j - b] += std::exp(base - row[j] / lambda - m[j - b]);
    }
    for (std::size_t j = b; j < e; ++j) out.values[j] = -lambda * (m[j - b] + std::log(s[j - b]));
  }, 16);
  return out;
}

Potential double_transform(const Problem& prob, const Potential& psi) {
  return double_transform(prob, psi, prob.lambda());
}

Potential double_transform(const Problem& prob, const Potential& psi, double lambda) {
  return c_transform_dual(prob, c_transform(prob, psi, lambda), lambda);
}

Potential hard_c_transform(const Problem& prob, const Potential& psi) {
  check_side(prob, psi, Side::Y);
  const Matrix& c = prob.cost().matrix();
  const auto w = prob.nu().weights();
  Potential out{Vector(prob.mu().size()), Side::X, Normalization::Raw};
  for (std::size_t i = 0; i < c.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < c.cols(); ++j) {
      if (w[j] <= 0.0) continue;
      best = std::min(best, c(i, j) - psi.values[j]);
    }
    out.values[i] = best;
  }
  return out;
}

double semi_dual(const Problem& prob, const Potential& psi, std::optional<double> lambda_override) {
  const double lambda = lambda_override.value_or(prob.lambda());
  require(lambda >= 0.0, "lambda override must be nonnegative");
  const Potential phi = lambda == 0.0 ? hard_c_transform(prob, psi) : c_transform(prob, psi, lambda);
  return dot(phi.values, prob.mu().weights()) + dot(psi.values, prob.nu().weights());
}

double entropic_kantorovich(const Problem& prob, const Potential& psi) {
  return dot(c_transform(prob, psi).values, prob.mu().weights());
}

double exponential_mass(const Problem& prob, const Potential& phi, const Potential& psi) {
  check_side(prob, phi, Side::X);
  check_side(prob, psi, Side::Y);
  const double lambda = prob.lambda();
  const auto log_mu = prob.mu().log_weights();
  const auto log_nu = prob.nu().log_weights();
  const Matrix& c = prob.cost().matrix();
  double m = kNegInf;
  for (std::size_t i = 0; i < c.rows(); ++i) {
    if (log_mu[i] == kNegInf) continue;
    for (std::size_t j = 0; j < c.cols(); ++j) {
      if (log_nu[j] == kNegInf) continue;
      m = std::max(m, (phi.values[i] + psi.values[j] - c(i, j)) / lambda + log_mu[i] + log_nu[j]);
    }
  }
  double s = 0.0;
  for (std::size_t i = 0; i < c.rows(); ++i) {
    if (log_mu[i] == kNegInf) continue;
    for (std::size_t j = 0; j < c.cols(); ++j) {
      if (log_nu[j] == kNegInf) continue;
      s += std::exp((phi.values[i] + psi.values[j] - c(i, j)) / lambda + log_mu[i] + log_nu[j] - m);
    }
  }
  return std::exp(m) * s;
}

double dual_value(const Problem& prob, const Potential& phi, const Potential& psi) {
  return dot(phi.values, prob.mu().weights()) + dot(psi.values, prob.nu().weights()) +
         prob.lambda() * (1.0 - exponential_mass(prob, phi, psi));
}

ConditionalFamily conditionals(const Problem& prob, const Potential& psi) {
  check_side(prob, psi, Side::Y);
  const double lambda = prob.lambda();
  const Matrix& c = prob.cost().matrix();
  const auto log_w = prob.nu().log_weights();
  ConditionalFamily fam{Matrix(c.rows(), c.cols(), 0.0)};
  parallel_for(c.rows(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const double lz = row_log_mass(c, i, psi.values, log_w, lambda);
      auto out = fam.rows.row(i);
      for (std::size_t j = 0; j < c.cols(); ++j) {
        if (log_w[j] == kNegInf) continue;
        out[j] = std::exp((psi.values[j] - c(i, j)) / lambda + log_w[j] - lz);
      }
    }
  }, 16);
  return fam;
}

Vector mixture(const ConditionalFamily& family, std::span<const double> mixing) {
  require(mixing.size() == family.size(), "mixing weights do not match the conditional family");
  Vector out(family.rows.cols(), 0.0);
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto row = family.row(i);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += mixing[i] * row[j];
  }
  return out;
}

Matrix plan(const Problem& prob, const Potential& psi) {
  ConditionalFamily fam = conditionals(prob, psi);
  const auto mu = prob.mu().weights();
  for (std::size_t i = 0; i < fam.size(); ++i)
    for (double& v : fam.rows.row(i)) v *= mu[i];
  return std::move(fam.rows);
}

SecondMarginal second_marginal(const Problem& prob, const Potential& psi) {
  ConditionalFamily fam = conditionals(prob, psi);
  Vector w = mixture(fam, prob.mu().weights());
  return {prob.nu().reweighted(std::move(w)), std::move(fam)};
}

double kl_nu_gap(const Problem& prob, const Potential& psi) {
  const Potential next = double_transform(prob, psi);
  const auto w = prob.nu().weights();
  double s = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * (next.values[j] - psi.values[j]);
  return s / prob.lambda();
}

StepResult step(const Problem& prob, const Potential& psi) {
  Potential phi = c_transform(prob, psi);
  Potential next = c_transform_dual(prob, phi);
  return {std::move(phi), std::move(next)};
}

double reference_tolerance(const Problem& prob) { return 1e-13 * std::max(1.0, prob.c_osc()); }

SinkhornTrace solve(const Problem& prob, const Potential& psi0, std::size_t max_iters, double tol) {
  require(tol > 0.0, "tol must be positive");
  require(max_iters >= 1, "max_iters must be at least 1");
  check_side(prob, psi0, Side::Y);
  const double lambda = prob.lambda();
  const auto mu = prob.mu().weights();
  const auto nu = prob.nu().weights();

  SinkhornTrace trace;
  trace.c_osc = prob.c_osc();
  Potential psi = psi0;
  for (std::size_t t = 0;; ++t) {
    StepResult s = step(prob, psi);
    const double E = dot(s.phi_half.values, mu) + dot(psi.values, nu);
    double gain = 0.0;
    for (std::size_t j = 0; j < nu.size(); ++j) gain += nu[j] * (s.psi_next.values[j] - psi.values[j]);
    TraceRow row;
    row.t = t;
    row.lambda = lambda;
    row.E = E;
    row.kl = gain / lambda;
    trace.rows.push_back(row);
    trace.residual = gain;
    if (gain <= tol) {
      trace.converged = true;
      break;
    }
    if (t == max_iters) break;
    psi = std::move(s.psi_next);
  }

  trace.psi_ref = mean_zero(psi, prob.nu());
  trace.E_ref = semi_dual(prob, trace.psi_ref);

  // Second pass: the iteration is deterministic, so replaying it reproduces
  // every psi_t bit-for-bit without storing them.
  psi = psi0;
  Vector diff(nu.size());
  for (std::size_t k = 0; k < trace.rows.size(); ++k) {
    TraceRow& row = trace.rows[k];
    for (std::size_t j = 0; j < diff.size(); ++j) diff[j] = trace.psi_ref.values[j] - psi.values[j];
    row.delta = std::max(trace.E_ref - row.E, 0.0);
    row.var_gap = variance(nu, diff);
    row.osc = oscillation(diff);
    if (k + 1 < trace.rows.size()) psi = double_transform(prob, psi);
  }
  return trace;
}

SinkhornTrace reference_solve(const Problem& prob, const Potential& psi0) {
  return solve(prob, psi0, kReferenceMaxIters, reference_tolerance(prob));
}

DirectionalDerivatives K_directional_derivatives(const Problem& prob, const Potential& psi,
                                                 std::span<const double> v, double eps) {
  require(v.size() == prob.nu().size(), "direction must live on spt(nu)");
  const Potential at = axpy(psi, eps, v);
  const ConditionalFamily fam = conditionals(prob, at);
  const auto mu = prob.mu().weights();
  DirectionalDerivatives d;
  for (std::size_t i = 0; i < fam.size(); ++i) {
    const auto row = fam.row(i);
    d.first -= mu[i] * expectation(row, v);
    d.second -= mu[i] * variance(row, v);
  }
  d.second /= prob.lambda();
  return d;
}

Potential axpy(const Potential& psi, double s, std::span<const double> v) {
  require(v.size() == psi.size(), "direction length does not match potential");
  Potential out = psi;
  out.normalization = Normalization::Raw;
  for (std::size_t k = 0; k < v.size(); ++k) out.values[k] += s * v[k];
  return out;
}

}  // namespace entrot
