#include <gtest/gtest.h>

#include <cmath>

#include "../support/instances.hpp"
#include "entrot/sinkhorn.hpp"

using namespace entrot;
using fixtures::random_potential;
using fixtures::random_problem;
using fixtures::two_point_problem;

namespace {

Problem zero_cost_problem(std::size_t n, std::size_t m, double lambda, std::uint64_t seed) {
  Rng rng(seed);
  DiscreteMeasure mu(fixtures::random_points(rng, n, 1), fixtures::random_weights(rng, n));
  DiscreteMeasure nu(fixtures::random_points(rng, m, 1), fixtures::random_weights(rng, m));
  return Problem(mu, nu, CostModel::from_matrix(Matrix(mu.size(), nu.size(), 0.0)), lambda);
}

// Transform by plain exponential sums, no log-sum-exp shift.
Vector naive_transform(const Problem& p, const Vector& psi) {
  Vector out(p.mu().size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < psi.size(); ++j)
      s += p.nu().weight(j) * std::exp((psi[j] - p.cost()(i, j)) / p.lambda());
    out[i] = -p.lambda() * std::log(s);
  }
  return out;
}

}  // namespace

TEST(Transform, TwoPointValues) {
  const Problem p = two_point_problem();
  const Potential phi = c_transform(p, Potential::zeros(2, Side::Y));
  EXPECT_EQ(phi.side, Side::X);
  EXPECT_NEAR(phi[0], 0.0, 1e-15);
  EXPECT_NEAR(phi[1], -std::log((1.0 + std::exp(1.0)) / 2.0), 1e-15);
  EXPECT_NEAR(phi[1], -0.620114506958278, 1e-14);
  const Potential psi2 = c_transform_dual(p, phi);
  // mpmath oracle
  EXPECT_NEAR(psi2[0], 0.262740487449489, 1e-14);
  EXPECT_NEAR(psi2[1], -0.207874432284592, 1e-14);
  EXPECT_NEAR(kl_nu_gap(p, Potential::zeros(2, Side::Y)), 0.0274330275824484, 1e-14);
  EXPECT_NEAR(semi_dual(p, Potential::zeros(2, Side::Y)), -0.310057253479139, 1e-14);
}

TEST(Transform, MatchesNaiveSumsAtModerateLambda) {
  Rng rng(21);
  for (int k = 0; k < 30; ++k) {
    const Problem p = random_problem(rng, 20, 0.5, 2.0);
    const Potential psi = random_potential(rng, p);
    const Vector ref = naive_transform(p, psi.values);
    const Potential phi = c_transform(p, psi);
    for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(phi[i], ref[i], 1e-12);
  }
}

TEST(Transform, StableForTinyLambda) {
  Rng rng(22);
  Problem p = random_problem(rng, 30).with_lambda(1e-6);
  const Potential psi = random_potential(rng, p, 5.0);
  const Potential phi = c_transform(p, psi);
  const Potential hard = hard_c_transform(p, psi);
  for (std::size_t i = 0; i < phi.size(); ++i) {
    ASSERT_TRUE(std::isfinite(phi[i]));
    EXPECT_GE(phi[i], hard[i] - 1e-12);
    EXPECT_LE(phi[i], hard[i] + 1e-6 * -std::log(p.nu().min_weight()) + 1e-12);
  }
}

TEST(Transform, ZeroCost) {
  const Problem p = zero_cost_problem(5, 4, 0.3, 1);
  const Potential z = Potential::zeros(p.nu().size(), Side::Y);
  for (double v : c_transform(p, z).values) EXPECT_NEAR(v, 0.0, 1e-15);
  for (double v : c_transform_dual(p, Potential::zeros(p.mu().size(), Side::X)).values) EXPECT_NEAR(v, 0.0, 1e-15);
  for (double v : hard_c_transform(p, z).values) EXPECT_EQ(v, 0.0);
  EXPECT_NEAR(semi_dual(p, z), 0.0, 1e-15);
  EXPECT_NEAR(dual_value(p, Potential::zeros(p.mu().size(), Side::X), z), 0.0, 1e-15);
  const Matrix g = plan(p, z);
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) EXPECT_NEAR(g(i, j), p.mu().weight(i) * p.nu().weight(j), 1e-15);
}

TEST(Transform, ZeroCostDoubleTransformIsConstant) {
  const Problem p = zero_cost_problem(5, 6, 0.7, 2);
  Rng rng(3);
  const Potential psi = random_potential(rng, p);
  const Potential out = double_transform(p, psi);
  double s = 0.0;
  for (std::size_t j = 0; j < psi.size(); ++j) s += p.nu().weight(j) * std::exp(psi[j] / p.lambda());
  for (double v : out.values) EXPECT_NEAR(v, p.lambda() * std::log(s), 1e-12);
}

TEST(Transform, TranslationEquivariance) {
  Rng rng(23);
  for (int k = 0; k < 50; ++k) {
    const Problem p = random_problem(rng, 30);
    const Potential psi = random_potential(rng, p);
    Potential shifted = psi;
    for (double& v : shifted.values) v += 7.0;
    const Potential a = c_transform(p, psi), b = c_transform(p, shifted);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(b[i], a[i] - 7.0, 1e-12);
    EXPECT_NEAR(semi_dual(p, shifted), semi_dual(p, psi), 1e-12);
    const Matrix g1 = plan(p, psi), g2 = plan(p, shifted);
    for (std::size_t i = 0; i < g1.rows(); ++i)
      for (std::size_t j = 0; j < g1.cols(); ++j) EXPECT_NEAR(g1(i, j), g2(i, j), 1e-14);
  }
}

TEST(Transform, OscillationAndLipschitz) {
  Rng rng(24);
  for (int k = 0; k < 50; ++k) {
    const Problem p = random_problem(rng, 30);
    const Potential psi = random_potential(rng, p, 10.0);
    const Potential phi = c_transform(p, psi);
    EXPECT_LE(oscillation(phi.values), p.c_osc() + 1e-12);
    EXPECT_LE(oscillation(c_transform_dual(p, phi).values), p.c_osc() + 1e-12);
    if (const auto lip = p.cost().meta().lip) {
      for (std::size_t a = 0; a < phi.size(); ++a)
        for (std::size_t b = 0; b < phi.size(); ++b) {
          double dist = 0.0;
          for (std::size_t d = 0; d < p.mu().dim(); ++d)
            dist += std::pow(p.mu().point(a)[d] - p.mu().point(b)[d], 2);
          EXPECT_LE(std::abs(phi[a] - phi[b]), *lip * std::sqrt(dist) + 1e-12);
        }
    }
  }
}

TEST(Transform, HardBelowSoft) {
  const Problem p = two_point_problem();
  const Potential hard = hard_c_transform(p, Potential::zeros(2, Side::Y));
  EXPECT_EQ(hard[1], -1.0);
  Rng rng(25);
  for (int k = 0; k < 30; ++k) {
    const Problem q = random_problem(rng, 30);
    const Potential psi = random_potential(rng, q);
    const Potential h = hard_c_transform(q, psi), s = c_transform(q, psi);
    for (std::size_t i = 0; i < h.size(); ++i) EXPECT_LE(h[i], s[i] + 1e-12);
  }
}

TEST(Transform, SideChecks) {
  const Problem p = two_point_problem();
  EXPECT_THROW(c_transform(p, Potential::zeros(2, Side::X)), Error);
  EXPECT_THROW(c_transform(p, Potential::zeros(3, Side::Y)), Error);
  EXPECT_THROW(p.with_lambda(0.0), Error);
}

TEST(Dual, SemiDualIsMaxOverPhi) {
  Rng rng(26);
  for (int k = 0; k < 30; ++k) {
    const Problem p = random_problem(rng, 25);
    const Potential psi = random_potential(rng, p);
    const Potential phi = c_transform(p, psi);
    EXPECT_NEAR(exponential_mass(p, phi, psi), 1.0, 1e-12);
    const double best = dual_value(p, phi, psi);
    EXPECT_NEAR(best, semi_dual(p, psi), 1e-12);
    Potential other = phi;
    for (double& v : other.values) v += rng.uniform(-0.5, 0.5);
    EXPECT_GE(best, dual_value(p, other, psi) - 1e-12);
  }
}

TEST(Plan, MarginalsAndConditionals) {
  Rng rng(27);
  for (int k = 0; k < 30; ++k) {
    const Problem p = random_problem(rng, 30);
    const Potential psi = random_potential(rng, p);
    const Matrix g = plan(p, psi);
    const auto rs = g.row_sums();
    double total = 0.0;
    for (std::size_t i = 0; i < rs.size(); ++i) {
      EXPECT_NEAR(rs[i], p.mu().weight(i), 1e-12);
      total += rs[i];
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    const SecondMarginal sm = second_marginal(p, psi);
    for (std::size_t i = 0; i < sm.family.size(); ++i) {
      double s = 0.0;
      for (double v : sm.family.row(i)) s += v;
      EXPECT_NEAR(s, 1.0, 1e-12);
    }
    const auto cs = g.col_sums();
    for (std::size_t j = 0; j < cs.size(); ++j) EXPECT_NEAR(sm.nu_psi.weight(j), cs[j], 1e-12);
  }
}

TEST(Plan, SingleAtomTarget) {
  DiscreteMeasure mu({{0.0}, {1.0}, {2.0}}, {1, 2, 3});
  DiscreteMeasure nu({{0.5}}, {1.0});
  const Problem p(mu, nu, CostModel::build(CostKind::Quadratic, mu.points(), nu.points()), 0.4);
  const Potential psi{{3.0}, Side::Y, Normalization::Raw};
  EXPECT_NEAR(second_marginal(p, psi).nu_psi.weight(0), 1.0, 1e-15);
  const StepResult s = step(p, psi);
  EXPECT_NEAR(kl_nu_gap(p, s.psi_next), 0.0, 1e-14);
  EXPECT_NEAR(double_transform(p, s.psi_next)[0], s.psi_next[0], 1e-14);
}

TEST(KLIdentity, MatchesDirectDivergence) {
  Rng rng(28);
  for (int k = 0; k < 100; ++k) {
    const Problem p = random_problem(rng, 30);
    const Potential psi = random_potential(rng, p);
    const double direct = kl_divergence(p.nu(), second_marginal(p, psi).nu_psi);
    const double gap = kl_nu_gap(p, psi);
    EXPECT_NEAR(gap, direct, 1e-10);
    EXPECT_GE(gap, -1e-12);
  }
}

TEST(Step, ImprovementIdentity) {
  Rng rng(29);
  for (int k = 0; k < 50; ++k) {
    const Problem p = random_problem(rng, 30);
    const Potential psi = random_potential(rng, p);
    const StepResult s = step(p, psi);
    const double lhs = dual_value(p, s.phi_half, s.psi_next) - dual_value(p, s.phi_half, psi);
    EXPECT_NEAR(lhs, p.lambda() * kl_nu_gap(p, psi), 1e-10);
    EXPECT_GE(semi_dual(p, s.psi_next) - semi_dual(p, psi), p.lambda() * kl_nu_gap(p, psi) - 1e-10);
  }
}

TEST(Solve, ZeroCostConvergesImmediately) {
  const Problem p = zero_cost_problem(4, 5, 0.5, 4);
  const SinkhornTrace tr = solve(p, Potential::zeros(p.nu().size(), Side::Y), 100, 1e-12);
  ASSERT_EQ(tr.rows.size(), 1u);
  EXPECT_TRUE(tr.converged);
  EXPECT_EQ(tr.rows[0].delta, 0.0);
}

TEST(Solve, TraceInvariants) {
  Rng rng(30);
  for (int k = 0; k < 20; ++k) {
    const Problem p = random_problem(rng, 40);
    const SinkhornTrace tr = reference_solve(p, random_potential(rng, p, 2.0));
    ASSERT_TRUE(tr.converged);
    EXPECT_EQ(tr.psi_ref.normalization, Normalization::MeanZero);
    EXPECT_NEAR(expectation(p.nu(), tr.psi_ref.values), 0.0, 1e-13);
    for (std::size_t t = 0; t < tr.rows.size(); ++t) {
      const TraceRow& r = tr.rows[t];
      EXPECT_EQ(r.t, t);
      EXPECT_GE(r.kl, -1e-12);
      EXPECT_GE(r.delta, 0.0);
      if (t > 0) {
        EXPECT_GE(r.E, tr.rows[t - 1].E - 1e-12);
        EXPECT_LE(r.osc, 2.0 * p.c_osc() + 1e-10);
      }
    }
    // Fixed point and marginal at the reference.
    const Potential again = double_transform(p, tr.psi_ref);
    for (std::size_t j = 0; j < again.size(); ++j) EXPECT_NEAR(again[j], tr.psi_ref[j], 1e-5);
    const SecondMarginal sm = second_marginal(p, tr.psi_ref);
    for (std::size_t j = 0; j < p.nu().size(); ++j) EXPECT_NEAR(sm.nu_psi.weight(j), p.nu().weight(j), 1e-5);
  }
}

TEST(Solve, GapIdentity) {
  Rng rng(31);
  for (int k = 0; k < 20; ++k) {
    const Problem p = random_problem(rng, 30);
    const SinkhornTrace tr = reference_solve(p, Potential::zeros(p.nu().size(), Side::Y));
    const Matrix gs = plan(p, tr.psi_ref);
    for (int r = 0; r < 5; ++r) {
      const Potential psi = random_potential(rng, p);
      const Matrix g = plan(p, psi);
      const double kl = kl_divergence(gs.data(), g.data());
      // The reference is only approximately optimal; its marginal error enters at first order.
      const double tol = 2.0 * p.c_osc() * std::sqrt(2.0 * tr.residual / p.lambda()) + 1e-9;
      EXPECT_NEAR(semi_dual(p, tr.psi_ref) - semi_dual(p, psi), p.lambda() * kl, tol);
    }
  }
}

TEST(Solve, NotConvergedIsAStatus) {
  Rng rng(32);
  const Problem p = random_problem(rng, 30, 0.05, 0.06);
  const SinkhornTrace tr = solve(p, Potential::zeros(p.nu().size(), Side::Y), 1, 1e-300);
  EXPECT_FALSE(tr.converged);
  EXPECT_EQ(tr.rows.size(), 2u);
  EXPECT_THROW(solve(p, Potential::zeros(p.nu().size(), Side::Y), 0, 1e-3), Error);
}

TEST(Solve, SecondPassReplaysIterates) {
  Rng rng(33);
  const Problem p = random_problem(rng, 20);
  const Potential psi0 = random_potential(rng, p);
  const SinkhornTrace tr = solve(p, psi0, 50, 1e-14);
  Potential psi = psi0;
  for (const TraceRow& r : tr.rows) {
    EXPECT_EQ(semi_dual(p, psi), r.E);
    Vector d(psi.size());
    for (std::size_t j = 0; j < d.size(); ++j) d[j] = tr.psi_ref[j] - psi[j];
    EXPECT_EQ(oscillation(d), r.osc);
    psi = double_transform(p, psi);
  }
}

TEST(Homogeneity, RescaledProblemTracksOriginal) {
  Rng rng(34);
  for (int k = 0; k < 20; ++k) {
    const Problem p = random_problem(rng, 25);
    const double a = rng.uniform(0.3, 4.0);
    const Problem q(p.mu(), p.nu(), p.cost().scaled(a), a * p.lambda());
    Potential x = random_potential(rng, p), y = x;
    for (double& v : y.values) v *= a;
    for (int t = 0; t < 4; ++t) {
      EXPECT_NEAR(entropic_kantorovich(q, y), a * entropic_kantorovich(p, x), 1e-10 * std::max(1.0, a));
      EXPECT_NEAR(semi_dual(q, y), a * semi_dual(p, x), 1e-10 * std::max(1.0, a));
      const SecondMarginal mx = second_marginal(p, x), my = second_marginal(q, y);
      for (std::size_t j = 0; j < p.nu().size(); ++j) EXPECT_NEAR(mx.nu_psi.weight(j), my.nu_psi.weight(j), 1e-12);
      x = double_transform(p, x);
      y = double_transform(q, y);
    }
  }
}

TEST(Derivatives, ConstantDirection) {
  Rng rng(35);
  const Problem p = random_problem(rng, 20);
  const Vector v(p.nu().size(), 2.5);
  const DirectionalDerivatives d = K_directional_derivatives(p, random_potential(rng, p), v, 0.1);
  EXPECT_NEAR(d.first, -2.5, 1e-12);
  EXPECT_NEAR(d.second, 0.0, 1e-12);
}

TEST(Derivatives, MatchFiniteDifferencesOfK) {
  Rng rng(36);
  for (int k = 0; k < 30; ++k) {
    const Problem p = random_problem(rng, 25, 0.1, 2.0);
    const Potential psi = random_potential(rng, p);
    const Vector v = fixtures::random_vector(rng, p.nu().size());
    const DirectionalDerivatives an = K_directional_derivatives(p, psi, v);
    EXPECT_LE(an.second, 0.0);
    const double h = 1e-4;
    const double kp = entropic_kantorovich(p, axpy(psi, h, v)), km = entropic_kantorovich(p, axpy(psi, -h, v));
    const double k0 = entropic_kantorovich(p, psi);
    EXPECT_LE(std::abs((kp - km) / (2 * h) - an.first), 1e-5 * std::max(1.0, std::abs(an.first)));
    EXPECT_LE(std::abs((kp - 2 * k0 + km) / (h * h) - an.second), 1e-4 * std::max(1.0, std::abs(an.second)));
  }
}

TEST(Parallel, ThreadCountDoesNotChangeResults) {
  Rng rng(37);
  const Problem p = random_problem(rng, 60);
  const Potential psi = random_potential(rng, p);
  setenv("ENTROT_THREADS", "1", 1);
  const Potential a = double_transform(p, psi);
  setenv("ENTROT_THREADS", "4", 1);
  const Potential b = double_transform(p, psi);
  unsetenv("ENTROT_THREADS");
  EXPECT_EQ(a.values, b.values);
}
