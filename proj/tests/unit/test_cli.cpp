#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "entrot/cli/io.hpp"
#include "entrot/cli/plot.hpp"
#include "entrot/cli/run.hpp"

namespace fs = std::filesystem;
using namespace entrot;
using namespace entrot::cli;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("entrot_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    write_atomic(p, text);
    return p;
  }

  int run_config(const fs::path& cfg, const fs::path& out, std::optional<std::uint64_t> seed = std::nullopt) {
    RunOptions o;
    o.out = out;
    o.seed = seed;
    o.quiet = true;
    std::ostringstream so, se;
    const int code = run(cfg, o, so, se);
    last_err_ = se.str();
    return code;
  }

  fs::path dir_;
  std::string last_err_;
};

const char* kSmallSolve = R"({
  "command": "solve",
  "problem": {
    "mu": {"points": [[0], [0.5], [1]], "weights": [1, 2, 1]},
    "nu": {"points": [[0], [1]]},
    "cost": "quadratic",
    "lambda": 0.3
  },
  "checks": [{"name": "contraction", "assumption": "A3"}]
})";

}  // namespace

TEST_F(CliTest, ZeroCostSolveIsOneRow) {
  write("zero.csv", "0,0\n0,0\n");
  const auto cfg = write("c.json", R"({"command": "solve",
    "problem": {"mu": {"points": [0, 1]}, "nu": {"points": [0, 1]}, "cost": {"csv": "zero.csv"}, "lambda": 1}})");
  EXPECT_EQ(run_config(cfg, dir_ / "out"), 0) << last_err_;
  const CsvData trace = read_csv(dir_ / "out" / "trace.csv");
  ASSERT_EQ(trace.rows.size(), 1u);
  EXPECT_EQ(trace.rows[0][trace.column("delta")], 0.0);
  for (const char* f : {"trace.csv", "plot.csv", "report.json", "summary.md"}) EXPECT_TRUE(fs::exists(dir_ / "out" / f));
  for (const auto& e : fs::directory_iterator(dir_ / "out")) EXPECT_NE(e.path().extension(), ".tmp");
}

TEST_F(CliTest, GaussianSeriesRespectsLowerBound) {
  const auto cfg = write("g.json", R"({"command": "gaussian", "gaussian": {"sigma": 1, "lambda": 0.1, "T": 200}})");
  EXPECT_EQ(run_config(cfg, dir_ / "out"), 0) << last_err_;
  const CsvData plot = read_csv(dir_ / "out" / "plot.csv");
  ASSERT_EQ(plot.rows.size(), 201u);
  const std::size_t d = plot.column("delta"), lb = plot.column("lower_bound"), lbs = plot.column("lower_bound_simple");
  plot.column("log_ratio");
  for (const auto& r : plot.rows) {
    EXPECT_LE(r[lb], r[d]);
    EXPECT_GE(r[d], r[lbs] - 1e-12);
  }
}

TEST_F(CliTest, OutputsAreByteIdentical) {
  const auto cfg = write("s.json", kSmallSolve);
  ASSERT_EQ(run_config(cfg, dir_ / "a"), 0) << last_err_;
  ASSERT_EQ(run_config(cfg, dir_ / "b"), 0) << last_err_;
  for (const char* f : {"trace.csv", "plot.csv", "report.json", "summary.md"})
    EXPECT_EQ(read_file(dir_ / "a" / f), read_file(dir_ / "b" / f)) << f;
}

TEST_F(CliTest, VerifyReproducesReport) {
  ASSERT_EQ(run_config(write("s.json", kSmallSolve), dir_ / "solve"), 0) << last_err_;
  const auto cfg = write("v.json", R"({"command": "verify", "input": "solve/report.json",
    "checks": [{"name": "contraction", "assumption": "A3"}]})");
  ASSERT_EQ(run_config(cfg, dir_ / "v1"), 0) << last_err_;
  ASSERT_EQ(run_config(cfg, dir_ / "v2"), 0) << last_err_;
  EXPECT_EQ(read_file(dir_ / "v1" / "report.json"), read_file(dir_ / "v2" / "report.json"));
  EXPECT_EQ(read_file(dir_ / "v1" / "trace.csv"), read_file(dir_ / "solve" / "trace.csv"));

  // The CSV route needs the constants the JSON report carries.
  const Json rep = parse_json_file(dir_ / "solve" / "report.json");
  const auto csv_cfg = write("vc.json", std::string(R"({"command": "verify", "input": "solve/trace.csv", "c_osc": )") +
                                            format_number(rep["data"]["problem"]["c_osc"].get<double>()) +
                                            ", \"residual\": " + format_number(rep["data"]["residual"].get<double>()) + "}");
  ASSERT_EQ(run_config(csv_cfg, dir_ / "vc"), 0) << last_err_;
  const Json a = parse_json_file(dir_ / "v1" / "report.json"), b = parse_json_file(dir_ / "vc" / "report.json");
  EXPECT_EQ(a["checks"][0], b["checks"][0]);
}

TEST_F(CliTest, EveryCheckCarriesAnAnchor) {
  ASSERT_EQ(run_config(write("s.json", kSmallSolve), dir_ / "o"), 0) << last_err_;
  const Json rep = parse_json_file(dir_ / "o" / "report.json");
  ASSERT_GE(rep["checks"].size(), 2u);
  for (const auto& c : rep["checks"]) EXPECT_FALSE(c["anchor"].get<std::string>().empty());
  EXPECT_NE(read_file(dir_ / "o" / "summary.md").find("Prop one-step-improvement"), std::string::npos);
}

TEST_F(CliTest, NotConvergedIsAFinding) {
  const auto cfg = write("n.json", R"({"command": "solve",
    "problem": {"mu": {"points": [0, 1, 2]}, "nu": {"points": [0, 1.5]}, "cost": "quadratic", "lambda": 0.05},
    "run": {"max_iters": 1, "tol": 1e-300}})");
  EXPECT_EQ(run_config(cfg, dir_ / "o"), 2) << last_err_;
  const Json rep = parse_json_file(dir_ / "o" / "report.json");
  ASSERT_EQ(rep["findings"].size(), 1u);
  EXPECT_NE(rep["findings"][0].get<std::string>().find("not converged"), std::string::npos);
}

TEST_F(CliTest, AnnealSandwichIsAFinding) {
  const auto cfg = write("a.json", R"({"command": "anneal",
    "problem": {"mu": {"sample": {"lo": [-1], "hi": [1], "N": 30}}, "nu": {"sample": {"lo": [-1], "hi": [1], "N": 30}},
                "cost": "quadratic"},
    "schedule": {"kind": "power", "exponent": 0.3333333333333333}, "run": {"T": 100, "seed": 3}})");
  const int code = run_config(cfg, dir_ / "o");
  const Json rep = parse_json_file(dir_ / "o" / "report.json");
  for (const auto& c : rep["checks"])
    if (c["grade"] == "hard") EXPECT_TRUE(c["pass"].get<bool>()) << c["name"];
  EXPECT_TRUE(code == 0 || code == 2);
  EXPECT_EQ(read_csv(dir_ / "o" / "trace.csv").rows.size(), 100u);
}

TEST_F(CliTest, SeedOverrideChangesStats) {
  const auto cfg = write("st.json", R"({"command": "stats",
    "problem": {"mu": {"sample": {"lo": [-1], "hi": [1], "N": 20}}, "nu": {"points": [-1, 0, 1]}, "cost": "linear", "lambda": 0.5},
    "stats": {"N": 16, "M": 200, "psi": "zero"}, "run": {"seed": 5}})");
  ASSERT_NE(run_config(cfg, dir_ / "a"), 1) << last_err_;
  ASSERT_NE(run_config(cfg, dir_ / "b", 6), 1) << last_err_;
  ASSERT_NE(run_config(cfg, dir_ / "c", 5), 1) << last_err_;
  EXPECT_NE(read_file(dir_ / "a" / "trace.csv"), read_file(dir_ / "b" / "trace.csv"));
  EXPECT_EQ(read_file(dir_ / "a" / "trace.csv"), read_file(dir_ / "c" / "trace.csv"));
}

TEST_F(CliTest, ErrorsCarryContext) {
  const auto bad = write("bad.json", "{\n  \"command\": \"solve\",\n  oops\n}");
  EXPECT_EQ(run_config(bad, dir_ / "o"), 1);
  EXPECT_NE(last_err_.find("bad.json:3:"), std::string::npos) << last_err_;

  const auto unknown = write("u.json", R"({"command": "plot"})");
  EXPECT_EQ(run_config(unknown, dir_ / "o"), 1);
  EXPECT_NE(last_err_.find("command: unknown command"), std::string::npos) << last_err_;

  write("m.csv", "0,1\n0,x\n");
  const auto csv = write("c.json", R"({"command": "solve",
    "problem": {"mu": {"points": [0, 1]}, "nu": {"points": [0, 1]}, "cost": {"csv": "m.csv"}, "lambda": 1}})");
  EXPECT_EQ(run_config(csv, dir_ / "o"), 1);
  EXPECT_NE(last_err_.find("m.csv:2"), std::string::npos) << last_err_;

  const auto missing = write("mi.json", R"({"command": "gaussian", "gaussian": {"sigma": 1}})");
  EXPECT_EQ(run_config(missing, dir_ / "o"), 1);
  EXPECT_NE(last_err_.find("gaussian.lambda: missing"), std::string::npos) << last_err_;
}

TEST(PlotData, EmptyInputsAreHeaderOnly) {
  EXPECT_EQ(emit_plot_data(std::vector<TraceRow>{}), "t,delta,envelope,log_ratio\n");
  EXPECT_EQ(emit_plot_data(std::vector<GaussianRow>{}), "t,delta,lower_bound,lower_bound_simple,log_ratio\n");
  EXPECT_EQ(emit_plot_data(std::vector<AnnealedRow>{}), "t,lambda,eta,eta_plus_lambda_bound,log_ratio\n");
}

TEST(PlotData, LogRatioAndEnvelope) {
  std::vector<TraceRow> rows(3);
  for (std::size_t t = 0; t < 3; ++t) rows[t].t = t;
  rows[0].delta = 1.0, rows[1].delta = 0.5, rows[2].delta = 0.25;
  const std::string csv = emit_plot_data(rows, 2.0);
  EXPECT_EQ(csv, "t,delta,envelope,log_ratio\n"
                 "0,1,1," + format_number(std::log(0.5)) + "\n"
                 "1,0.5,0.5," + format_number(std::log(0.5)) + "\n"
                 "2,0.25,0.25,nan\n");
}

TEST(Report, ExitCodes) {
  RunReport r("x");
  EXPECT_EQ(r.exit_code(), 0);
  CheckResult f;
  f.grade = Grade::Finding;
  f.pass = false;
  r.add(f);
  EXPECT_EQ(r.exit_code(), 2);
  CheckResult h;
  h.pass = false;
  r.add(h);
  EXPECT_EQ(r.exit_code(), 1);
}

TEST(Io, NumberFormatRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02e23}) EXPECT_EQ(std::stod(format_number(v)), v);
  EXPECT_EQ(format_number(std::nan("")), "nan");
  EXPECT_TRUE(number_or_null(INFINITY).is_null());
}
