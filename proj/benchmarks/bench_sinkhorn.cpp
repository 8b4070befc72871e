#include <benchmark/benchmark.h>

#include "entrot/annealing.hpp"
#include "entrot/gaussian.hpp"
#include "entrot/rng.hpp"
#include "entrot/sinkhorn.hpp"
#include "entrot/transport_lp.hpp"

using namespace entrot;

namespace {

Problem make_problem(std::size_t n, double lambda) {
  std::vector<Point> x(n), y(n);
  std::vector<double> wx(n), wy(n);
  Rng rng(1234);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    y[i] = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    wx[i] = rng.uniform(0.1, 1.0);
    wy[i] = rng.uniform(0.1, 1.0);
  }
  DiscreteMeasure mu(std::move(x), std::move(wx)), nu(std::move(y), std::move(wy));
  CostModel c = CostModel::build(CostKind::Quadratic, mu.points(), nu.points());
  return Problem(std::move(mu), std::move(nu), std::move(c), lambda);
}

void BM_DoubleTransform(benchmark::State& state) {
  const Problem p = make_problem(static_cast<std::size_t>(state.range(0)), 0.05);
  Potential psi = Potential::zeros(p.nu().size(), Side::Y);
  for (auto _ : state) {
    psi = double_transform(p, psi);
    benchmark::DoNotOptimize(psi.values.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DoubleTransform)->RangeMultiplier(2)->Range(64, 1024)->Complexity(benchmark::oNSquared);

void BM_SemiDual(benchmark::State& state) {
  const Problem p = make_problem(static_cast<std::size_t>(state.range(0)), 0.05);
  const Potential psi = Potential::zeros(p.nu().size(), Side::Y);
  for (auto _ : state) benchmark::DoNotOptimize(semi_dual(p, psi));
}
BENCHMARK(BM_SemiDual)->Arg(256)->Arg(1024);

void BM_Solve(benchmark::State& state) {
  const Problem p = make_problem(static_cast<std::size_t>(state.range(0)), 0.1);
  for (auto _ : state) {
    const SinkhornTrace tr = solve(p, Potential::zeros(p.nu().size(), Side::Y), 100000, 1e-10);
    benchmark::DoNotOptimize(tr.E_ref);
    state.counters["iterations"] = static_cast<double>(tr.iterations());
  }
}
BENCHMARK(BM_Solve)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_TransportLP(benchmark::State& state) {
  const Problem p = make_problem(static_cast<std::size_t>(state.range(0)), 1.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(solve_transport_lp(p.cost().matrix(), p.mu().weights(), p.nu().weights()).cost);
}
BENCHMARK(BM_TransportLP)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_GaussianSeries(benchmark::State& state) {
  const GaussianProblem g{1.0, 0.01};
  for (auto _ : state) benchmark::DoNotOptimize(gaussian_series(g, static_cast<std::size_t>(state.range(0))).back().delta);
}
BENCHMARK(BM_GaussianSeries)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
