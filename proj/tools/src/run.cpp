#include "entrot/cli/run.hpp"

#include <cmath>

#include "entrot/annealing.hpp"
#include "entrot/cli/plot.hpp"
#include "entrot/gaussian.hpp"
#include "entrot/stats.hpp"

namespace entrot::cli {

namespace fs = std::filesystem;

namespace {

std::string fmt(double v) { return format_number(v); }

std::string trace_csv(const std::vector<TraceRow>& rows) {
  Table t({"t", "lambda", "E", "delta", "kl", "var_gap", "osc"});
  for (const auto& r : rows) t.add({static_cast<double>(r.t), r.lambda, r.E, r.delta, r.kl, r.var_gap, r.osc});
  return t.csv();
}

Json trace_json(const std::vector<TraceRow>& rows) {
  Json a = Json::array();
  for (const auto& r : rows)
    a.push_back({{"t", r.t},
                 {"lambda", r.lambda},
                 {"E", r.E},
                 {"delta", r.delta},
                 {"kl", r.kl},
                 {"var_gap", r.var_gap},
                 {"osc", r.osc}});
  return a;
}

CheckResult counted(std::string name, std::string anchor, Grade grade, std::size_t rows, std::size_t failures,
                    std::string detail = {}) {
  CheckResult c;
  c.name = std::move(name);
  c.anchor = std::move(anchor);
  c.grade = grade;
  c.rows = rows;
  c.failures = failures;
  c.pass = failures == 0;
  c.detail = std::move(detail);
  return c;
}

CheckResult boolean(std::string name, std::string anchor, Grade grade, bool pass, std::string detail = {}) {
  return counted(std::move(name), std::move(anchor), grade, 1, pass ? 0 : 1, std::move(detail));
}

std::vector<Node> listed_checks(const Node& root) {
  if (!root.has("checks")) return {};
  return root.child("checks").items();
}

/// Checks shared by solve and verify: one-step improvement always, plus the
/// assumption-conditional ones the config asks for.
void trace_checks(const SinkhornTrace& tr, double lambda, const Node& root, RunReport& rep,
                  std::optional<double>& plot_alpha) {
  rep.add(from_report(verify_one_step(tr, tr.c_osc, lambda), Grade::Hard));
  for (const Node& c : listed_checks(root)) {
    const std::string name = c.text("name");
    if (name == "one_step") continue;
    if (name == "variance_subopt") {
      const AssumptionTag tag = build_assumption(c);
      const VarianceConstants k = variance_bound_constants(tag, tr.c_osc, lambda);
      CheckReport r = verify_variance_subopt(tr, k, c.count("t_min", 0));
      r.note = tag.name() + ": C1=" + fmt(k.C1) + ", C2=" + fmt(k.C2);
      rep.add(from_report(r, Grade::Finding));
    } else if (name == "contraction") {
      const AssumptionTag tag = build_assumption(c);
      const double alpha = c.has("alpha") ? c.positive("alpha") : theorem_alpha(tag, tr.c_osc, lambda);
      const ContractionReport cr = verify_contraction(tr, alpha);
      std::size_t eligible = 0;
      for (char e : cr.eligible) eligible += e != 0;
      rep.add(counted("contraction", "Thm exponential-convergence", Grade::Finding, eligible, cr.violations,
                      tag.name() + ": alpha=" + fmt(alpha) + ", max ratio=" + fmt(cr.max_ratio) +
                          ", bound=" + fmt(cr.bound)));
      plot_alpha = alpha;
      Json ratios = Json::array();
      for (double r : cr.ratio) ratios.push_back(number_or_null(r));
      rep.data()["contraction"] = {{"alpha", alpha}, {"bound", cr.bound}, {"max_ratio", cr.max_ratio}, {"ratio", ratios}};
    } else {
      c.fail("name", "unknown check '" + name + "' for this command");
    }
  }
}

Artifacts run_solve(const ExperimentConfig& cfg) {
  const Node root = cfg.root();
  const Problem prob = build_problem(cfg, root.child("problem"));
  std::size_t max_iters = kReferenceMaxIters;
  double tol = reference_tolerance(prob);
  if (const auto run = root.optional_child("run")) {
    max_iters = run->count("max_iters", max_iters);
    tol = run->positive("tol", tol);
  }
  const SinkhornTrace tr = solve(prob, Potential::zeros(prob.nu().size(), Side::Y), max_iters, tol);

  Artifacts a;
  a.report = RunReport("solve");
  Json& d = a.report.data();
  d["problem"] = {{"n", prob.mu().size()}, {"m", prob.nu().size()}, {"lambda", prob.lambda()}, {"c_osc", tr.c_osc}};
  d["iterations"] = tr.iterations();
  d["converged"] = tr.converged;
  d["residual"] = tr.residual;
  d["tol"] = tol;
  d["E_ref"] = tr.E_ref;
  d["psi_ref"] = tr.psi_ref.values;
  d["trace"] = trace_json(tr.rows);
  if (!tr.converged)
    a.report.note("not converged: residual " + fmt(tr.residual) + " > tol " + fmt(tol) + " after " +
                  std::to_string(tr.iterations()) + " iterations; delta is measured against the last iterate");

  std::optional<double> alpha;
  trace_checks(tr, prob.lambda(), root, a.report, alpha);
  a.trace_csv = trace_csv(tr.rows);
  a.plot_csv = emit_plot_data(tr.rows, alpha);
  return a;
}

SinkhornTrace load_trace(const ExperimentConfig& cfg, const Node& root, double& lambda) {
  const fs::path input = cfg.resolve(root.text("input"));
  SinkhornTrace tr;
  if (input.extension() == ".json") {
    const Json j = parse_json_file(input);
    const Node data(j.contains("data") ? j["data"] : j, input.string(), "data");
    const Node problem = data.child("problem");
    lambda = problem.positive("lambda");
    tr.c_osc = problem.number("c_osc");
    tr.residual = data.number("residual");
    tr.converged = data.has("converged") && data.json()["converged"].get<bool>();
    for (const Node& r : data.child("trace").items()) {
      TraceRow row;
      row.t = r.count("t");
      row.lambda = r.number("lambda");
      row.E = r.number("E");
      row.delta = r.number("delta");
      row.kl = r.number("kl");
      row.var_gap = r.number("var_gap");
      row.osc = r.number("osc");
      tr.rows.push_back(row);
    }
    return tr;
  }
  const CsvData csv = read_csv(input);
  std::size_t ct = 0, cl = 0, ce = 0, cd = 0, ck = 0, cv = 0, co = 0;
  try {
    ct = csv.column("t"), cl = csv.column("lambda"), ce = csv.column("E"), cd = csv.column("delta");
    ck = csv.column("kl"), cv = csv.column("var_gap"), co = csv.column("osc");
  } catch (const Error& e) {
    throw Error(input.string() + ": " + e.what());
  }
  for (const auto& r : csv.rows) {
    TraceRow row;
    row.t = static_cast<std::size_t>(r[ct]);
    row.lambda = r[cl];
    row.E = r[ce];
    row.delta = r[cd];
    row.kl = r[ck];
    row.var_gap = r[cv];
    row.osc = r[co];
    tr.rows.push_back(row);
  }
  if (tr.rows.empty()) root.fail("input", "trace has no rows");
  lambda = tr.rows.front().lambda;
  tr.c_osc = root.number("c_osc");
  tr.residual = root.number("residual", 0.0);
  tr.converged = true;
  return tr;
}

Artifacts run_verify(const ExperimentConfig& cfg) {
  const Node root = cfg.root();
  double lambda = 0.0;
  const SinkhornTrace tr = load_trace(cfg, root, lambda);
  Artifacts a;
  a.report = RunReport("verify");
  a.report.data()["problem"] = {{"lambda", lambda}, {"c_osc", tr.c_osc}};
  a.report.data()["residual"] = tr.residual;
  a.report.data()["rows"] = tr.rows.size();
  std::optional<double> alpha;
  trace_checks(tr, lambda, root, a.report, alpha);
  a.trace_csv = trace_csv(tr.rows);
  a.plot_csv = emit_plot_data(tr.rows, alpha);
  return a;
}

Artifacts run_gaussian(const ExperimentConfig& cfg) {
  const Node g = cfg.root().child("gaussian");
  const GaussianProblem p{g.positive("sigma", 1.0), g.positive("lambda")};
  const std::size_t T = g.count("T", 200);
  if (T < 1) g.fail("T", "must be at least 1");
  const auto rows = gaussian_series(p, T);
  const double as = fixed_point_alpha(p);

  Artifacts a;
  a.report = RunReport("gaussian");
  std::size_t lb = 0, lbs = 0, mono = 0, gap = 0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k].delta < rows[k].lower_bound - 1e-12) ++lb;
    if (rows[k].delta < rows[k].lower_bound_simple - 1e-12) ++lbs;
    if (rows[k].delta < 0.0) ++gap;
    if (k > 0 && (rows[k].alpha > rows[k - 1].alpha || rows[k].delta > rows[k - 1].delta)) ++mono;
    if (rows[k].alpha < as - 1e-12) ++mono;
  }
  a.report.add(counted("lower_bound_speed", "Thm lower-bound-speed-gaussian", Grade::Hard, rows.size(), lb));
  if (p.certified_regime())
    a.report.add(counted("lower_bound_simple", "Thm lower-bound-gaussian-less-formal", Grade::Hard, rows.size(), lbs,
                         "(sigma/20)(1 - 5 lambda/sigma)^t"));
  a.report.add(counted("alpha_monotone", "Lemma convergence-alpha", Grade::Hard, rows.size(), mono + gap));

  const LimitingRatio lr = limiting_ratio(p);
  Json& d = a.report.data();
  d["sigma"] = p.sigma;
  d["lambda"] = p.lambda;
  d["alpha_star"] = as;
  d["E_star"] = optimal_value(p);
  d["certified_regime"] = p.certified_regime();
  d["limiting_alpha_ratio"] = lr.alpha_ratio;
  d["limiting_delta_ratio"] = lr.delta_ratio;

  Table t({"t", "alpha", "beta", "E", "delta", "lower_bound", "lower_bound_simple", "ratio"});
  for (const auto& r : rows)
    t.add({static_cast<double>(r.t), r.alpha, r.beta, r.E, r.delta, r.lower_bound, r.lower_bound_simple, r.ratio});
  a.trace_csv = t.csv();
  a.plot_csv = emit_plot_data(rows);
  return a;
}

Artifacts run_anneal(const ExperimentConfig& cfg) {
  const Node root = cfg.root();
  const Problem prob = build_problem(cfg, root.child("problem"));
  const Schedule schedule = build_schedule(root.child("schedule"));
  std::size_t T = 500;
  if (const auto run = root.optional_child("run")) T = run->count("T", T);
  if (T < 1) root.fail("run.T", "must be at least 1");
  const AnnealedTrace tr = run_annealed(prob, schedule, T);

  std::function<double(double)> alpha_of_lambda;
  std::optional<Node> curve_node;
  for (const Node& c : listed_checks(root)) {
    const std::string name = c.text("name");
    if (name == "strong_recursion") {
      const AssumptionTag tag = build_assumption(c);
      const double c_osc = prob.c_osc();
      alpha_of_lambda = [tag, c_osc](double l) { return theorem_alpha(tag, c_osc, l); };
    } else if (name == "cost_curve") {
      curve_node = c;
    } else if (name != "sandwich" && name != "weak_recursion") {
      c.fail("name", "unknown check '" + name + "' for this command");
    }
  }
  const AnnealingCheck chk = check_annealed(tr, alpha_of_lambda);

  Artifacts a;
  a.report = RunReport("anneal");
  const std::string sandwich = "eq annealing-3rd-term";
  a.report.add(counted("sandwich_lower", sandwich, Grade::Hard, chk.steps, chk.lower_violations,
                       "0 <= E(psi_t, lambda_t) - E(psi_t, 0)"));
  a.report.add(counted("sandwich_upper_stated", sandwich, Grade::Finding, chk.steps, chk.upper_violations,
                       "E(psi_t, lambda_t) - E(psi_t, 0) <= lambda_t; max ratio " + fmt(chk.max_upper_ratio)));
  a.report.add(counted("sandwich_upper_corrected", sandwich, Grade::Hard, chk.steps, chk.upper_corrected_violations,
                       "E(psi_t, lambda_t) - E(psi_t, 0) <= lambda_t log(1/min nu)"));
  a.report.add(counted("weak_recursion", "eq annealing-2nd-term", Grade::Hard, chk.steps, chk.recursion_violations,
                       "eta_{t+1} <= eta_t + lambda_{t+1}"));
  if (chk.strong_checked)
    a.report.add(counted("strong_recursion", "eq annealing-2nd-term", Grade::Finding, chk.steps, chk.strong_violations,
                         "eta_{t+1} <= (1 - 1/alpha(lambda)) eta_t + lambda_{t+1}"));

  Json& d = a.report.data();
  d["schedule"] = schedule.describe();
  d["T"] = T;
  d["reference"] = tr.reference;
  d["reference_width"] = tr.reference_width;
  d["eta0"] = tr.eta0;
  d["log_inv_min_nu"] = tr.log_inv_min_nu;

  if (curve_node) {
    const Vector lambdas = curve_node->numbers("lambdas");
    for (double l : lambdas)
      if (!(l > 0.0)) curve_node->fail("lambdas", "entries must be positive");
    const auto curve = entropic_cost_curve(prob, lambdas);
    const CostCurveCheck cc = check_cost_curve(curve);
    const std::string anchor = "Annealing h-curve";
    a.report.add(boolean("h_nondecreasing", anchor, Grade::Hard, cc.nondecreasing));
    a.report.add(boolean("h_concave", anchor, Grade::Hard, cc.concave));
    a.report.add(boolean("h_entropy_bound", anchor, Grade::Hard, cc.entropy_bound));
    Json pts = Json::array();
    for (const auto& p : curve)
      pts.push_back({{"lambda", p.lambda}, {"h", p.h}, {"kl", p.kl}, {"transport", p.transport}, {"converged", p.converged}});
    d["cost_curve"] = std::move(pts);
  }

  Table t({"t", "lambda", "E_reg", "E_unreg", "eta"});
  for (const auto& r : tr.rows) t.add({static_cast<double>(r.t), r.lambda, r.E_reg, r.E_unreg, r.eta});
  a.trace_csv = t.csv();
  a.plot_csv = emit_plot_data(tr.rows);
  return a;
}

Artifacts run_stats(const ExperimentConfig& cfg) {
  const Node root = cfg.root();
  const Problem prob = build_problem(cfg, root.child("problem"));
  const Node s = root.child("stats");
  ReplicationPlan plan;
  plan.N = s.count("N", plan.N);
  plan.M = s.count("M", plan.M);
  plan.seed = cfg.seed;
  if (s.has("f") && s.child("f").is_array()) {
    plan.f = s.numbers("f");
  } else {
    const std::string f = s.text("f", "coordinate");
    if (f != "coordinate") s.fail("f", "expected an array or \"coordinate\"");
    for (const Point& y : prob.nu().points()) plan.f.push_back(y[0]);
  }
  const std::string psi = s.text("psi", "reference");
  if (psi == "zero") plan.psi = Potential::zeros(prob.nu().size(), Side::Y);
  else if (psi == "reference") plan.psi = reference_solve(prob, Potential::zeros(prob.nu().size(), Side::Y)).psi_ref;
  else s.fail("psi", "expected \"zero\" or \"reference\"");
  try {
    plan.validate(prob);
  } catch (const Error& e) {
    s.fail("", e.what());
  }

  Artifacts a;
  a.report = RunReport("stats");
  const MonteCarloReport mc = mc_variance_gap(prob, plan);
  a.report.add(boolean("monte_carlo_var", "Prop monte-carlo-var", Grade::Hard, mc.pass,
                       "mean |gap| " + fmt(mc.mean_abs_gap) + " vs " + fmt(mc.bound) + " x " + fmt(mc.slack_factor)));

  Vector eps = s.has("epsilons") ? s.numbers("epsilons") : Vector{};
  if (eps.empty())
    for (double b : {0.5, 0.1, 0.02}) eps.push_back(epsilon_for_tail_bound(plan.N, mc.f_sup, b));
  const ConcentrationReport conc = concentration_coverage(prob, plan, eps, s.positive("eta", 0.1));
  std::size_t tail_fail = 0;
  for (const auto& r : conc.tails) tail_fail += r.pass ? 0 : 1;
  a.report.add(counted("concentration_tails", "Prop concentration-var-N", Grade::Hard, conc.tails.size(), tail_fail));
  a.report.add(boolean("concentration_high_probability", "Prop concentration-var-N", Grade::Hard,
                       conc.high_probability.pass,
                       "fraction above threshold " + fmt(conc.high_probability.fraction)));

  const DominationReport dom = conditional_variance_dominations(prob, plan.psi, plan.f);
  const std::string lemma = "Lemma bound-var-var";
  a.report.add(boolean("domination_mean", lemma, Grade::Hard, dom.mean.pass,
                       fmt(dom.mean.lhs) + " <= " + fmt(dom.mean.rhs)));
  a.report.add(counted("domination_stated", lemma, Grade::Finding, 2,
                       (dom.second_moment.pass ? 0 : 1) + (dom.squared_mean.pass ? 0 : 1), "constant 2||f||^2"));
  a.report.add(counted("domination_corrected", lemma, Grade::Hard, 2,
                       (dom.second_moment_4.pass ? 0 : 1) + (dom.squared_mean_4.pass ? 0 : 1), "constant 4||f||^2"));

  Json& d = a.report.data();
  d["N"] = plan.N;
  d["M"] = plan.M;
  d["seed"] = plan.seed;
  d["var_exact"] = mc.var_exact;
  d["f_sup"] = mc.f_sup;
  d["mean_abs_gap"] = mc.mean_abs_gap;
  d["bound"] = mc.bound;
  Json tails = Json::array();
  for (const auto& r : conc.tails)
    tails.push_back({{"epsilon", r.epsilon}, {"empirical", r.empirical_tail}, {"bound", r.bound}, {"pass", r.pass}});
  d["tails"] = std::move(tails);

  const Vector vars = replicate_variances(prob, plan);
  Table t({"m", "variance"});
  for (std::size_t m = 0; m < vars.size(); ++m) t.add({static_cast<double>(m), vars[m]});
  a.trace_csv = t.csv();
  Table p({"m", "abs_gap", "bound"});
  for (std::size_t m = 0; m < vars.size(); ++m) p.add({static_cast<double>(m), std::abs(vars[m] - mc.var_exact), mc.bound});
  a.plot_csv = p.csv();
  return a;
}

}  // namespace

Artifacts execute(const ExperimentConfig& cfg) {
  switch (cfg.command) {
    case Command::Solve: return run_solve(cfg);
    case Command::Gaussian: return run_gaussian(cfg);
    case Command::Anneal: return run_anneal(cfg);
    case Command::Stats: return run_stats(cfg);
    case Command::Verify: return run_verify(cfg);
  }
  throw Error("unreachable command");
}

int run(const fs::path& config, const RunOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    ExperimentConfig cfg = load_config(config);
    if (opts.seed) cfg.seed = *opts.seed;
    if (opts.out) cfg.output = *opts.out;
    if (cfg.output.empty()) throw Error(config.string() + ": no output directory (set \"output\" or pass --out)");
    Artifacts a = execute(cfg);
    write_atomic(cfg.output / "trace.csv", a.trace_csv);
    write_atomic(cfg.output / "plot.csv", a.plot_csv);
    write_atomic(cfg.output / "report.json", a.report.json().dump(2) + "\n");
    write_atomic(cfg.output / "summary.md", a.report.summary_markdown());
    if (!opts.quiet) {
      for (const auto& c : a.report.checks())
        out << (c.pass ? "pass " : (c.grade == Grade::Hard ? "FAIL " : "find ")) << c.name << " [" << c.anchor << "]"
            << (c.failures ? " failures=" + std::to_string(c.failures) : "") << "\n";
      out << "wrote " << cfg.output.string() << " (exit " << a.report.exit_code() << ")\n";
    }
    return a.report.exit_code();
  } catch (const std::exception& e) {
    err << "entrot: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace entrot::cli
