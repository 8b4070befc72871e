#include "entrot/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "entrot/rng.hpp"

namespace entrot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_point(const Point& p, std::size_t dim) {
  require(p.size() == dim, "point dimension mismatch");
  for (double v : p) require(std::isfinite(v), "non-finite coordinate");
}

double broadcast(const Point& v, std::size_t k) { return v.size() == 1 ? v[0] : v.at(k); }

}  // namespace

DiscreteMeasure::DiscreteMeasure(std::vector<Point> points, std::vector<double> weights) {
  require(!points.empty(), "measure needs at least one point");
  require(points.size() == weights.size(), "points/weights length mismatch");
  dim_ = points.front().size();
  require(dim_ >= 1, "points must have at least one coordinate");

  std::map<Point, std::size_t> seen;
  double total = 0.0;
  for (std::size_t k = 0; k < points.size(); ++k) {
    check_point(points[k], dim_);
    const double w = weights[k];
    require(std::isfinite(w) && w >= 0.0, "weights must be finite and nonnegative");
    total += w;
    auto [it, inserted] = seen.try_emplace(points[k], points_.size());
    if (inserted) {
      points_.push_back(std::move(points[k]));
      weights_.push_back(w);
    } else {
      weights_[it->second] += w;
    }
  }
  require(total > 0.0, "weights must have positive total mass");
  for (double& w : weights_) w /= total;
  log_weights_.resize(weights_.size());
  for (std::size_t k = 0; k < weights_.size(); ++k)
    log_weights_[k] = weights_[k] > 0.0 ? std::log(weights_[k]) : -kInf;
}

DiscreteMeasure DiscreteMeasure::uniform(std::vector<Point> points) {
  std::vector<double> w(points.size(), 1.0);
  return DiscreteMeasure(std::move(points), std::move(w));
}

double DiscreteMeasure::min_weight() const { return *std::min_element(weights_.begin(), weights_.end()); }
double DiscreteMeasure::max_weight() const { return *std::max_element(weights_.begin(), weights_.end()); }

double DiscreteMeasure::radius() const {
  double r = 0.0;
  for (const auto& p : points_) {
    double s = 0.0;
    for (double v : p) s += v * v;
    r = std::max(r, std::sqrt(s));
  }
  return r;
}

std::optional<std::size_t> DiscreteMeasure::index_of(const Point& p) const {
  for (std::size_t k = 0; k < points_.size(); ++k)
    if (points_[k] == p) return k;
  return std::nullopt;
}

DiscreteMeasure DiscreteMeasure::reweighted(std::vector<double> weights) const {
  require(weights.size() == size(), "reweighted: length mismatch");
  return DiscreteMeasure(points_, std::move(weights));
}

double density_value(const Density& density, const Point& x) {
  return std::visit(
      [&x](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, UniformDensity>) {
          return 1.0;
        } else if constexpr (std::is_same_v<T, GaussianDensity>) {
          double s = 0.0;
          for (std::size_t k = 0; k < x.size(); ++k) {
            const double z = x[k] - broadcast(d.mean, k);
            s += z * z;
          }
          return std::exp(-s / (2.0 * d.sigma * d.sigma));
        } else {
          double s = 0.0;
          for (std::size_t k = 0; k < x.size(); ++k) {
            const double z = x[k] - broadcast(d.center, k);
            s += z * z;
          }
          return std::exp(-0.5 * d.curvature * s);
        }
      },
      density);
}

std::string density_name(const Density& density) {
  switch (density.index()) {
    case 0: return "uniform";
    case 1: return "gaussian";
    default: return "logconcave";
  }
}

namespace {

void validate_density(const Density& density, std::size_t dim) {
  if (const auto* g = std::get_if<GaussianDensity>(&density)) {
    require(g->sigma > 0.0 && std::isfinite(g->sigma), "gaussian sigma must be positive");
    require(g->mean.size() == 1 || g->mean.size() == dim, "gaussian mean dimension mismatch");
  } else if (const auto* v = std::get_if<LogConcaveDensity>(&density)) {
    require(v->curvature >= 0.0 && std::isfinite(v->curvature), "log-concave curvature must be >= 0");
    require(v->center.size() == 1 || v->center.size() == dim, "log-concave center dimension mismatch");
  }
}

void validate_box(const Point& lo, const Point& hi) {
  require(!lo.empty() && lo.size() == hi.size(), "bounds must be nonempty and of equal dimension");
  for (std::size_t k = 0; k < lo.size(); ++k) {
    require(std::isfinite(lo[k]) && std::isfinite(hi[k]), "bounds must be finite");
    require(lo[k] < hi[k], "lo < hi required on every axis");
  }
}

}  // namespace

void GridSpec::validate() const {
  validate_box(lo, hi);
  require(n >= 2, "grid needs n >= 2");
  validate_density(density, lo.size());
}

DiscreteMeasure make_grid_measure(const GridSpec& spec) {
  spec.validate();
  const std::size_t d = spec.lo.size();
  std::size_t total = 1;
  for (std::size_t k = 0; k < d; ++k) {
    require(total <= std::numeric_limits<std::size_t>::max() / spec.n, "grid too large");
    total *= spec.n;
  }
  std::vector<Point> points;
  std::vector<double> weights;
  points.reserve(total);
  weights.reserve(total);
  std::vector<std::size_t> idx(d, 0);
  const double denom = static_cast<double>(spec.n - 1);
  for (std::size_t flat = 0; flat < total; ++flat) {
    Point x(d);
    for (std::size_t k = 0; k < d; ++k)
      x[k] = spec.lo[k] + (spec.hi[k] - spec.lo[k]) * (static_cast<double>(idx[k]) / denom);
    const double w = density_value(spec.density, x);
    require(std::isfinite(w) && w >= 0.0, "density must be finite and nonnegative");
    points.push_back(std::move(x));
    weights.push_back(w);
    for (std::size_t k = d; k-- > 0;) {
      if (++idx[k] < spec.n) break;
      idx[k] = 0;
    }
  }
  const double mass = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(mass > 0.0)) throw Error("degenerate density");
  return DiscreteMeasure(std::move(points), std::move(weights));
}

void SamplerSpec::validate() const {
  validate_box(lo, hi);
  validate_density(density, lo.size());
}

DiscreteMeasure sample_empirical(const SamplerSpec& sampler, std::size_t n, std::uint64_t seed) {
  sampler.validate();
  require(n >= 1, "sample size must be >= 1");
  const std::size_t d = sampler.lo.size();
  Rng rng(seed);

  // Normal proposal for gaussian / log-concave densities, rejected outside the box.
  double sigma = 0.0;
  Point center(d, 0.0);
  if (const auto* g = std::get_if<GaussianDensity>(&sampler.density)) {
    sigma = g->sigma;
    for (std::size_t k = 0; k < d; ++k) center[k] = broadcast(g->mean, k);
  } else if (const auto* v = std::get_if<LogConcaveDensity>(&sampler.density)) {
    if (v->curvature > 0.0) sigma = 1.0 / std::sqrt(v->curvature);
    for (std::size_t k = 0; k < d; ++k) center[k] = broadcast(v->center, k);
  }

  constexpr std::size_t kMaxTries = 1000000;
  std::vector<Point> points;
  points.reserve(n);
  for (std::size_t s = 0; s < n; ++s) {
    Point x(d);
    if (sigma == 0.0) {
      for (std::size_t k = 0; k < d; ++k) x[k] = rng.uniform(sampler.lo[k], sampler.hi[k]);
    } else {
      std::size_t tries = 0;
      for (;;) {
        bool inside = true;
        for (std::size_t k = 0; k < d; ++k) {
          x[k] = center[k] + sigma * rng.normal();
          inside = inside && x[k] >= sampler.lo[k] && x[k] <= sampler.hi[k];
        }
        if (inside) break;
        require(++tries < kMaxTries, "sampler: truncation box has negligible mass");
      }
    }
    points.push_back(std::move(x));
  }
  return DiscreteMeasure::uniform(std::move(points));
}

std::vector<std::size_t> sample_indices(std::span<const double> weights, std::size_t n, std::uint64_t seed) {
  require(n >= 1, "sample size must be >= 1");
  require(!weights.empty(), "cannot sample from an empty measure");
  std::vector<double> cdf(weights.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    acc += weights[k];
    cdf[k] = acc;
  }
  Rng rng(seed);
  std::vector<std::size_t> out(n);
  for (std::size_t s = 0; s < n; ++s) {
    const double u = rng.uniform() * acc;
    std::size_t k = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    if (k >= weights.size()) k = weights.size() - 1;
    // Skip zero-weight atoms that share a cdf value with their predecessor.
    while (weights[k] == 0.0 && k + 1 < weights.size()) ++k;
    out[s] = k;
  }
  return out;
}

DiscreteMeasure sample_from(const DiscreteMeasure& m, std::size_t n, std::uint64_t seed) {
  std::vector<Point> points;
  points.reserve(n);
  for (std::size_t k : sample_indices(m.weights(), n, seed)) points.push_back(m.point(k));
  return DiscreteMeasure::uniform(std::move(points));
}

double expectation(std::span<const double> weights, std::span<const double> f) {
  require(weights.size() == f.size(), "expectation: length mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) s += weights[k] * f[k];
  return s;
}

double variance(std::span<const double> weights, std::span<const double> f) {
  const double mean = expectation(weights, f);
  double s = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double z = f[k] - mean;
    s += weights[k] * z * z;
  }
  return s;
}

double expectation(const DiscreteMeasure& m, std::span<const double> f) { return expectation(m.weights(), f); }
double variance(const DiscreteMeasure& m, std::span<const double> f) { return variance(m.weights(), f); }

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  require(p.size() == q.size(), "kl_divergence: length mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] == 0.0) continue;
    if (q[k] == 0.0) return kInf;
    s += p[k] * std::log(p[k] / q[k]);
  }
  return std::max(s, 0.0);
}

double kl_divergence(const DiscreteMeasure& rho, const DiscreteMeasure& pi) {
  require(rho.size() == pi.size(), "kl_divergence: mismatched supports");
  if (rho.same_support(pi)) return kl_divergence(rho.weights(), pi.weights());
  std::vector<double> q(rho.size());
  for (std::size_t k = 0; k < rho.size(); ++k) {
    const auto j = pi.index_of(rho.point(k));
    require(j.has_value(), "kl_divergence: mismatched supports");
    q[k] = pi.weight(*j);
  }
  return kl_divergence(rho.weights(), q);
}

double weight_ratio(const DiscreteMeasure& m) {
  const double lo = m.min_weight();
  return lo > 0.0 ? m.max_weight() / lo : kInf;
}

}  // namespace entrot
