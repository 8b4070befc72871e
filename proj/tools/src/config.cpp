#include "entrot/cli/config.hpp"

#include <cmath>

#include "entrot/cost.hpp"
#include "entrot/rng.hpp"

namespace entrot::cli {

std::string to_string(Command c) {
  switch (c) {
    case Command::Solve: return "solve";
    case Command::Gaussian: return "gaussian";
    case Command::Anneal: return "anneal";
    case Command::Stats: return "stats";
    case Command::Verify: return "verify";
  }
  return "?";
}

Node::Node(const Json& j, std::string file, std::string path) : j_(&j), file_(std::move(file)), path_(std::move(path)) {}

std::string Node::where(const std::string& key) const {
  std::string p = path_;
  if (!key.empty()) p += (p.empty() ? "" : ".") + key;
  return file_ + ": " + (p.empty() ? "<root>" : p);
}

void Node::fail(const std::string& key, const std::string& msg) const { throw Error(where(key) + ": " + msg); }

bool Node::has(const std::string& key) const { return j_->is_object() && j_->contains(key) && !(*j_)[key].is_null(); }

const Json& Node::at(const std::string& key) const {
  if (!j_->is_object()) fail("", "expected an object");
  if (!has(key)) fail(key, "missing");
  return (*j_)[key];
}

Node Node::child(const std::string& key) const { return Node(at(key), file_, path_.empty() ? key : path_ + "." + key); }

std::optional<Node> Node::optional_child(const std::string& key) const {
  if (!has(key)) return std::nullopt;
  return child(key);
}

std::vector<Node> Node::items() const {
  if (!j_->is_array()) fail("", "expected an array");
  std::vector<Node> out;
  for (std::size_t k = 0; k < j_->size(); ++k) out.emplace_back((*j_)[k], file_, path_ + "[" + std::to_string(k) + "]");
  return out;
}

double Node::number(const std::string& key) const {
  const Json& v = at(key);
  if (!v.is_number()) fail(key, "expected a number");
  return v.get<double>();
}

double Node::number(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }

double Node::positive(const std::string& key) const {
  const double v = number(key);
  if (!(v > 0.0) || !std::isfinite(v)) fail(key, "must be a positive finite number");
  return v;
}

double Node::positive(const std::string& key, double fallback) const { return has(key) ? positive(key) : fallback; }

std::size_t Node::count(const std::string& key) const {
  const Json& v = at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) fail(key, "expected a nonnegative integer");
  return v.get<std::size_t>();
}

std::size_t Node::count(const std::string& key, std::size_t fallback) const { return has(key) ? count(key) : fallback; }

std::uint64_t Node::u64(const std::string& key, std::uint64_t fallback) const {
  if (!has(key)) return fallback;
  const Json& v = at(key);
  if (!v.is_number_unsigned()) fail(key, "expected an unsigned integer");
  return v.get<std::uint64_t>();
}

std::string Node::text(const std::string& key) const {
  const Json& v = at(key);
  if (!v.is_string()) fail(key, "expected a string");
  return v.get<std::string>();
}

std::string Node::text(const std::string& key, const std::string& fallback) const { return has(key) ? text(key) : fallback; }

std::string Node::as_text() const {
  if (!j_->is_string()) fail("", "expected a string");
  return j_->get<std::string>();
}

Vector Node::numbers(const std::string& key) const {
  const Json& v = at(key);
  if (!v.is_array()) fail(key, "expected an array of numbers");
  Vector out;
  for (const auto& x : v) {
    if (!x.is_number()) fail(key, "expected an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::vector<Point> Node::points(const std::string& key) const {
  const Json& v = at(key);
  if (!v.is_array()) fail(key, "expected an array of points");
  std::vector<Point> out;
  for (const auto& p : v) {
    Point q;
    if (p.is_number()) {
      q.push_back(p.get<double>());
    } else if (p.is_array()) {
      for (const auto& x : p) {
        if (!x.is_number()) fail(key, "point coordinates must be numbers");
        q.push_back(x.get<double>());
      }
    } else {
      fail(key, "each point is a number or an array of numbers");
    }
    out.push_back(std::move(q));
  }
  return out;
}

std::filesystem::path ExperimentConfig::resolve(const std::string& p) const {
  const std::filesystem::path q(p);
  return q.is_absolute() ? q : file.parent_path() / q;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  ExperimentConfig cfg;
  cfg.file = path;
  cfg.raw = parse_json_file(path);
  const Node root = cfg.root();
  const std::string cmd = root.text("command");
  if (cmd == "solve") cfg.command = Command::Solve;
  else if (cmd == "gaussian") cfg.command = Command::Gaussian;
  else if (cmd == "anneal") cfg.command = Command::Anneal;
  else if (cmd == "stats") cfg.command = Command::Stats;
  else if (cmd == "verify") cfg.command = Command::Verify;
  else root.fail("command", "unknown command '" + cmd + "'");
  if (const auto run = root.optional_child("run")) cfg.seed = run->u64("seed", 0);
  if (root.has("output")) cfg.output = cfg.resolve(root.text("output"));
  return cfg;
}

Density build_density(const Node& d) {
  const std::string kind = d.text("kind", "uniform");
  if (kind == "uniform") return UniformDensity{};
  if (kind == "gaussian") {
    GaussianDensity g;
    if (d.has("mean")) g.mean = d.numbers("mean");
    g.sigma = d.positive("sigma", 1.0);
    return g;
  }
  if (kind == "log_concave") {
    LogConcaveDensity l;
    l.curvature = d.positive("curvature", 1.0);
    if (d.has("center")) l.center = d.numbers("center");
    return l;
  }
  d.fail("kind", "unknown density '" + kind + "'");
}

DiscreteMeasure build_measure(const ExperimentConfig& cfg, const Node& m, std::uint64_t seed) {
  (void)cfg;
  if (const auto g = m.optional_child("grid")) {
    GridSpec spec;
    spec.lo = g->numbers("lo");
    spec.hi = g->numbers("hi");
    spec.n = g->count("n");
    if (const auto d = g->optional_child("density")) spec.density = build_density(*d);
    try {
      return make_grid_measure(spec);
    } catch (const Error& e) {
      g->fail("", e.what());
    }
  }
  if (const auto s = m.optional_child("sample")) {
    SamplerSpec spec;
    spec.lo = s->numbers("lo");
    spec.hi = s->numbers("hi");
    if (const auto d = s->optional_child("density")) spec.density = build_density(*d);
    try {
      return sample_empirical(spec, s->count("N"), s->u64("seed", seed));
    } catch (const Error& e) {
      s->fail("", e.what());
    }
  }
  const auto pts = m.points("points");
  try {
    if (!m.has("weights")) return DiscreteMeasure::uniform(pts);
    return DiscreteMeasure(pts, m.numbers("weights"));
  } catch (const Error& e) {
    m.fail("", e.what());
  }
}

Problem build_problem(const ExperimentConfig& cfg, const Node& problem) {
  DiscreteMeasure mu = build_measure(cfg, problem.child("mu"), cfg.seed);
  DiscreteMeasure nu = build_measure(cfg, problem.child("nu"), derive_seed(cfg.seed, 1));
  const Node cost = problem.child("cost");
  std::optional<CostModel> c;
  if (cost.is_string()) {
    const std::string kind = cost.as_text();
    try {
      c = CostModel::build(cost_kind_from_string(kind), mu.points(), nu.points());
    } catch (const Error& e) {
      cost.fail("", e.what());
    }
  } else {
    const std::string file = cost.text("csv");
    Matrix m;
    try {
      m = load_matrix_csv(cfg.resolve(file).string());
    } catch (const Error& e) {
      cost.fail("csv", e.what());
    }
    if (m.rows() != mu.size() || m.cols() != nu.size())
      cost.fail("csv", "matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ", supports are " +
                           std::to_string(mu.size()) + "x" + std::to_string(nu.size()));
    c = CostModel::from_matrix(std::move(m), cost.number("xi", 0.0), cost.number("zeta", 0.0), mu.radius());
  }
  const double lambda = problem.has("lambda") ? problem.positive("lambda") : 1.0;
  return Problem(std::move(mu), std::move(nu), std::move(*c), lambda);
}

Schedule build_schedule(const Node& s) {
  const std::string kind = s.text("kind");
  Schedule out;
  if (kind == "constant") out = Schedule::constant(s.positive("lambda"));
  else if (kind == "power") out = Schedule::power(s.positive("exponent"), s.positive("scale", 1.0), s.number("floor", 0.0));
  else s.fail("kind", "unknown schedule '" + kind + "'");
  try {
    out.validate();
  } catch (const Error& e) {
    s.fail("", e.what());
  }
  return out;
}

AssumptionTag build_assumption(const Node& check) {
  const std::string name = check.text("assumption");
  const double kappa = check.number("kappa", 1.0), xi = check.number("xi", 0.0), r_x = check.number("r_x", 0.0);
  try {
    return assumption_from_string(name, kappa, xi, r_x);
  } catch (const Error& e) {
    check.fail("assumption", e.what());
  }
}

}  // namespace entrot::cli
