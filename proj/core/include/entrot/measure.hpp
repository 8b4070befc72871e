#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "entrot/common.hpp"

namespace entrot {

using Point = std::vector<double>;

/// Finitely supported probability measure on R^d.
///
/// Construction validates coordinates and weights, merges identical points by
/// adding their weights (first occurrence keeps its position), and rescales
/// the weights to sum to one. Immutable afterwards.
class DiscreteMeasure {
 public:
  DiscreteMeasure(std::vector<Point> points, std::vector<double> weights);

  /// Equal weights 1/n on the given points (before merging duplicates).
  static DiscreteMeasure uniform(std::vector<Point> points);

  std::size_t size() const { return weights_.size(); }
  std::size_t dim() const { return dim_; }

  const std::vector<Point>& points() const { return points_; }
  const Point& point(std::size_t i) const { return points_[i]; }
  std::span<const double> weights() const { return weights_; }
  double weight(std::size_t i) const { return weights_[i]; }

  /// Natural logs of the weights; -inf for zero weights.
  std::span<const double> log_weights() const { return log_weights_; }

  double min_weight() const;
  double max_weight() const;

  /// max_i ||x_i||.
  double radius() const;

  std::optional<std::size_t> index_of(const Point& p) const;

  /// Same support points in the same order.
  bool same_support(const DiscreteMeasure& other) const { return points_ == other.points_; }

  /// Copy with new weights on the same support (renormalized).
  DiscreteMeasure reweighted(std::vector<double> weights) const;

 private:
  std::vector<Point> points_;
  std::vector<double> weights_;
  std::vector<double> log_weights_;
  std::size_t dim_ = 0;
};

struct UniformDensity {};

/// Isotropic normal density exp(-||x - mean||^2 / (2 sigma^2)); a one-entry
/// mean is broadcast to every axis.
struct GaussianDensity {
  Point mean{0.0};
  double sigma = 1.0;
};

/// Log-concave density exp(-V) with V(x) = (curvature / 2) ||x - center||^2.
struct LogConcaveDensity {
  double curvature = 1.0;
  Point center{0.0};
};

using Density = std::variant<UniformDensity, GaussianDensity, LogConcaveDensity>;

/// Unnormalized density value at x.
double density_value(const Density& density, const Point& x);

std::string density_name(const Density& density);

/// Tensor lattice with n points per axis including both endpoints.
struct GridSpec {
  Point lo;
  Point hi;
  std::size_t n = 2;
  Density density = UniformDensity{};

  void validate() const;
};

/// Lattice points weighted by the density, renormalized to sum to one.
/// Throws "degenerate density" when the density vanishes on every node.
DiscreteMeasure make_grid_measure(const GridSpec& spec);

/// A density restricted to the box [lo, hi].
struct SamplerSpec {
  Point lo;
  Point hi;
  Density density = UniformDensity{};

  void validate() const;
};

/// n i.i.d. draws from the truncated density, equal weights 1/n, duplicates
/// merged. Deterministic in seed.
DiscreteMeasure sample_empirical(const SamplerSpec& sampler, std::size_t n, std::uint64_t seed);

/// n i.i.d. atom indices drawn by inverse CDF over `weights` in index order.
std::vector<std::size_t> sample_indices(std::span<const double> weights, std::size_t n, std::uint64_t seed);

/// n i.i.d. draws from a discrete measure by inverse CDF over the support in
/// index order. Deterministic in seed.
DiscreteMeasure sample_from(const DiscreteMeasure& m, std::size_t n, std::uint64_t seed);

double expectation(std::span<const double> weights, std::span<const double> f);
double variance(std::span<const double> weights, std::span<const double> f);
double expectation(const DiscreteMeasure& m, std::span<const double> f);
double variance(const DiscreteMeasure& m, std::span<const double> f);

/// KL(p | q) for aligned probability vectors; +inf when p puts mass where q
/// has none.
double kl_divergence(std::span<const double> p, std::span<const double> q);

/// KL(rho | pi), pairing atoms by identical coordinates. Both supports must
/// be the same point set.
double kl_divergence(const DiscreteMeasure& rho, const DiscreteMeasure& pi);

/// Surrogate for the density ratio of a grid measure: max weight / min weight.
double weight_ratio(const DiscreteMeasure& m);

}  // namespace entrot
