#include "entrot/gaussian.hpp"

#include <cmath>
#include <limits>

#include "entrot/common.hpp"

namespace entrot {
namespace {

double denom(const GaussianProblem& p, double x) {
  const double s2 = p.sigma * p.sigma;
  return 2.0 * s2 + 2.0 * p.lambda * p.lambda - 4.0 * p.lambda * s2 * x;
}

// -log(1 - u) - u, accurate for small u.
double log_remainder(double u) {
  if (std::abs(u) < 1e-3) {
    double term = u * u, sum = 0.0;
    for (int k = 2; k <= 8; ++k, term *= u) sum += term / k;
    return sum;
  }
  return -std::log1p(-u) - u;
}

}  // namespace

void GaussianProblem::validate() const {
  require(sigma > 0.0 && std::isfinite(sigma), "sigma must be positive");
  require(lambda > 0.0 && std::isfinite(lambda), "lambda must be positive");
}

GaussianIterate make_iterate(const GaussianProblem& p, std::size_t t, double alpha, double beta) {
  p.validate();
  require(alpha <= 0.0, "invalid regime: alpha must be nonpositive");
  const double s2 = p.sigma * p.sigma;
  const double den = 4.0 * s2 * alpha - 2.0 * p.lambda;
  require(den < 0.0, "invalid regime");
  GaussianIterate it;
  it.t = t;
  it.alpha = alpha;
  it.beta = beta;
  it.gamma = s2 / den;
  it.omega = -beta + 0.5 * p.lambda * std::log1p(-2.0 * s2 * alpha / p.lambda);
  return it;
}

GaussianIterate initial(const GaussianProblem& p) { return make_iterate(p, 0, 0.0, 0.0); }

GaussianIterate recursion_step(const GaussianProblem& p, const GaussianIterate& it) {
  const double den = 4.0 * it.gamma - 2.0 * p.lambda;
  require(den < 0.0, "invalid regime");
  const double alpha = alpha_map(p, it.alpha);
  const double beta = -it.omega + 0.5 * p.lambda * std::log1p(-2.0 * it.gamma / p.lambda);
  return make_iterate(p, it.t + 1, alpha, beta);
}

double alpha_map(const GaussianProblem& p, double x) {
  const double d = denom(p, x);
  require(d > 0.0, "invalid regime");
  return (2.0 * p.sigma * p.sigma * x - p.lambda) / d;
}

double alpha_map_derivative(const GaussianProblem& p, double x) {
  const double s2 = p.sigma * p.sigma;
  const double d = denom(p, x);
  return 4.0 * s2 * s2 / (d * d);
}

double fixed_point_alpha(const GaussianProblem& p) {
  p.validate();
  const double s2 = p.sigma * p.sigma;
  return (p.lambda - std::sqrt(4.0 * s2 + p.lambda * p.lambda)) / (4.0 * s2);
}

double semidual_value(const GaussianProblem& p, double alpha) {
  p.validate();
  require(alpha <= 0.0, "invalid regime: alpha must be nonpositive");
  const double s2 = p.sigma * p.sigma;
  return s2 * alpha + 0.5 * p.lambda * std::log1p(-2.0 * s2 * alpha / p.lambda) +
         s2 / (4.0 * s2 * alpha - 2.0 * p.lambda);
}

double optimal_value(const GaussianProblem& p) {
  p.validate();
  const double l = p.lambda;
  const double r = std::sqrt(l * l + 4.0 * p.sigma * p.sigma);
  return 0.5 * l * std::log(0.5 + r / (2.0 * l)) + 0.5 * l - 0.5 * r;
}

double gap_from_deviation(const GaussianProblem& p, double d) {
  // The first-order terms vanish at the fixed point; what remains is
  // (l/2)(-log(1-u) - u) - 16 s^6 d^2 / (P^2 Q), both nonnegative.
  const double s2 = p.sigma * p.sigma;
  const double a = fixed_point_alpha(p);
  const double k = 2.0 * s2 / p.lambda;
  const double u = k * d / (1.0 - k * a);
  const double P = 4.0 * s2 * a - 2.0 * p.lambda;
  const double Q = P + 4.0 * s2 * d;
  return 0.5 * p.lambda * log_remainder(u) - 16.0 * s2 * s2 * s2 * d * d / (P * P * Q);
}

double next_deviation(const GaussianProblem& p, double d) {
  const double s2 = p.sigma * p.sigma;
  const double a = fixed_point_alpha(p);
  return 4.0 * s2 * s2 * d / (denom(p, a + d) * denom(p, a));
}

std::vector<double> delta_series(const GaussianProblem& p, std::size_t T) {
  std::vector<double> out;
  out.reserve(T + 1);
  for (const GaussianRow& r : gaussian_series(p, T)) out.push_back(r.delta);
  return out;
}

double lower_bound_speed(const GaussianProblem& p, std::size_t t) {
  const double s = p.sigma, l = p.lambda;
  const double a = fixed_point_alpha(p);
  const double q = 1.0 - 4.0 * l / s - 4.0 * l * l / (s * s);
  return 2.0 * std::pow(s, 6) / std::pow(s + l, 3) * std::pow(q, static_cast<double>(t)) * a * a;
}

double lower_bound_simple(const GaussianProblem& p, std::size_t t) {
  return p.sigma / 20.0 * std::pow(1.0 - 5.0 * p.lambda / p.sigma, static_cast<double>(t));
}

double alpha_deviation_lower_bound(const GaussianProblem& p, std::size_t t) {
  const double s = p.sigma, l = p.lambda;
  const double q = 1.0 - 2.0 * l / s - 2.0 * l * l / (s * s);
  return std::pow(q, static_cast<double>(t)) * -fixed_point_alpha(p);
}

LimitingRatio limiting_ratio(const GaussianProblem& p) {
  const double f = alpha_map_derivative(p, fixed_point_alpha(p));
  return {f, f * f};
}

std::vector<GaussianRow> gaussian_series(const GaussianProblem& p, std::size_t T) {
  p.validate();
  const double a = fixed_point_alpha(p);
  std::vector<GaussianRow> rows;
  rows.reserve(T + 1);
  GaussianIterate it = initial(p);
  double d = -a;
  for (std::size_t t = 0; t <= T; ++t) {
    GaussianRow r;
    r.t = t;
    r.alpha = it.alpha;
    r.beta = it.beta;
    r.deviation = d;
    r.E = semidual_value(p, it.alpha);
    r.delta = gap_from_deviation(p, d);
    r.lower_bound = lower_bound_speed(p, t);
    r.lower_bound_simple = lower_bound_simple(p, t);
    r.ratio = t == 0 ? std::numeric_limits<double>::quiet_NaN() : r.delta / rows.back().delta;
    rows.push_back(r);
    if (t < T) {
      it = recursion_step(p, it);
      d = next_deviation(p, d);
    }
  }
  return rows;
}

RatioProbe measure_ratio(const GaussianProblem& p, double threshold, std::size_t max_t) {
  p.validate();
  double d = -fixed_point_alpha(p);
  for (std::size_t t = 0; t < max_t; ++t) {
    if (std::abs(d) < threshold) {
      const double dn = next_deviation(p, d);
      return {t, dn / d, gap_from_deviation(p, dn) / gap_from_deviation(p, d)};
    }
    d = next_deviation(p, d);
  }
  throw Error("deviation never dropped below threshold");
}

}  // namespace entrot
