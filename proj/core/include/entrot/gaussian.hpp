#pragma once

#include <cstddef>
#include <vector>

namespace entrot {

/// mu = N(0,1), nu = N(0, sigma^2), c(x,y) = -xy, regularization lambda.
struct GaussianProblem {
  double sigma = 1.0;
  double lambda = 0.1;

  void validate() const;
  /// lambda <= sigma / 5, where the lower-bound certificates apply.
  bool certified_regime() const { return lambda <= sigma / 5.0; }
};

/// psi_t(y) = alpha y^2 + beta, psi_t^{c,lambda}(x) = gamma x^2 + omega.
struct GaussianIterate {
  std::size_t t = 0;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double omega = 0.0;
};

/// psi_0 = 0.
GaussianIterate initial(const GaussianProblem& p);

/// Completes gamma/omega for a given (alpha, beta).
GaussianIterate make_iterate(const GaussianProblem& p, std::size_t t, double alpha, double beta);

GaussianIterate recursion_step(const GaussianProblem& p, const GaussianIterate& it);

/// f(x) = (2 s^2 x - l) / (2 s^2 + 2 l^2 - 4 l s^2 x).
double alpha_map(const GaussianProblem& p, double x);
double alpha_map_derivative(const GaussianProblem& p, double x);

double fixed_point_alpha(const GaussianProblem& p);

double semidual_value(const GaussianProblem& p, double alpha);
double optimal_value(const GaussianProblem& p);

/// E(psi*) - E(psi_t) expressed through d = alpha_t - alpha*. Written so that
/// no two nearly equal values are subtracted; accurate down to |d| ~ 1e-150.
double gap_from_deviation(const GaussianProblem& p, double d);

/// d_{t+1} = f(alpha* + d_t) - alpha*, without cancellation.
double next_deviation(const GaussianProblem& p, double d);

/// delta_t for t = 0..T from psi_0 = 0.
std::vector<double> delta_series(const GaussianProblem& p, std::size_t T);

/// (2 s^6/(s+l)^3) (1 - 4l/s - 4l^2/s^2)^t (alpha*)^2.
double lower_bound_speed(const GaussianProblem& p, std::size_t t);
/// (s/20) (1 - 5l/s)^t.
double lower_bound_simple(const GaussianProblem& p, std::size_t t);
/// (1 - 2l/s - 2l^2/s^2)^t (-alpha*), lower bound on alpha_t - alpha*.
double alpha_deviation_lower_bound(const GaussianProblem& p, std::size_t t);

struct LimitingRatio {
  double alpha_ratio = 0.0;  ///< f'(alpha*)
  double delta_ratio = 0.0;  ///< f'(alpha*)^2
};

LimitingRatio limiting_ratio(const GaussianProblem& p);

struct GaussianRow {
  std::size_t t = 0;
  double alpha = 0.0;
  double beta = 0.0;
  double deviation = 0.0;  ///< alpha_t - alpha*
  double E = 0.0;
  double delta = 0.0;
  double lower_bound = 0.0;         ///< lower_bound_speed
  double lower_bound_simple = 0.0;  ///< only meaningful when certified_regime()
  double ratio = 0.0;               ///< delta_t / delta_{t-1}; NaN at t = 0
};

std::vector<GaussianRow> gaussian_series(const GaussianProblem& p, std::size_t T);

struct RatioProbe {
  std::size_t t = 0;  ///< first t with |alpha_t - alpha*| < threshold
  double alpha_ratio = 0.0;
  double delta_ratio = 0.0;
};

/// Measured (alpha_{t+1} - alpha*)/(alpha_t - alpha*) and delta_{t+1}/delta_t
/// at the first t where the deviation drops below threshold.
RatioProbe measure_ratio(const GaussianProblem& p, double threshold = 1e-9, std::size_t max_t = 10000000);

}  // namespace entrot
