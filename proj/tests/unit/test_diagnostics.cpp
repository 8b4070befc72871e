#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "../support/instances.hpp"
#include "entrot/diagnostics.hpp"

using namespace entrot;
using fixtures::random_potential;
using fixtures::random_problem;

TEST(Constants, Alpha) {
  EXPECT_DOUBLE_EQ(theorem_alpha(AssumptionTag::a2(), 1.0, 1.0), 528.0);
  EXPECT_DOUBLE_EQ(theorem_alpha(AssumptionTag::a3(), 1.0, 1.0), 352.0);
  EXPECT_DOUBLE_EQ(theorem_alpha(AssumptionTag::a1(1.0, 0.0, 3.0), 0.7, 0.2),
                   theorem_alpha(AssumptionTag::a2(), 0.7, 0.2));
  EXPECT_DOUBLE_EQ(improved_alpha(AssumptionTag::a2(), 1.0, 1.0), 352.0);
  EXPECT_THROW(theorem_alpha(AssumptionTag::a2(), 1.0, 0.0), Error);
  EXPECT_THROW(theorem_alpha(AssumptionTag::a1(0.5, 0.0, 1.0), 1.0, 1.0), Error);
}

TEST(Constants, VarianceBounds) {
  const VarianceConstants a2 = variance_bound_constants(AssumptionTag::a2(), 1.0, 1.0);
  EXPECT_DOUBLE_EQ(a2.C1, 33.0);
  EXPECT_EQ(a2.C2, 0.0);
  const VarianceConstants a3 = variance_bound_constants(AssumptionTag::a3(), 1.0, 1.0);
  EXPECT_DOUBLE_EQ(a3.C1, 22.0);
  EXPECT_DOUBLE_EQ(a3.C2, 3.0);
  EXPECT_EQ(variance_bound_constants(AssumptionTag::a1(2.0, 1.0, 1.0), 0.5, 0.3).C2, 0.0);
}

TEST(Constants, ContractionAndT) {
  EXPECT_DOUBLE_EQ(contraction_from_bounds(33.0, 0.0, 1.0, 1.0), 528.0);
  EXPECT_NEAR(contraction_from_bounds(0.0, 3.0, 1.0, 1.0), 4.0 * std::sqrt(3.0) + 28.0 / 3.0, 1e-13);
  EXPECT_NEAR(contraction_from_bounds(0.0, 3.0, 1.0, 1.0), 16.2615, 1e-4);
  EXPECT_EQ(discrete_T(33.0, 528.0, 1.0, 0.1), 5005);
  EXPECT_EQ(discrete_T(1e-3, 528.0, 1.0, 0.5), 0);
  EXPECT_GE(discrete_T(33.0, 528.0, 1.0, 0.05), discrete_T(33.0, 528.0, 1.0, 0.1));
}

TEST(Checks, OneStepSanity) {
  EXPECT_TRUE(verify_one_step(0.0, 0.0, 0.0, 1.0, 1.0, 0.0).pass);
  EXPECT_FALSE(verify_one_step(0.5, 0.5 - 1e-6, 0.0, 1.0, 1.0, 0.0).pass);
  const VarianceConstants k{33.0, 0.0};
  EXPECT_TRUE(verify_variance_subopt(0.0, 0.0, 0.0, k, 0.0).pass);
  EXPECT_FALSE(verify_variance_subopt(0.01, 0.0, 1.0, k, 0.0).pass);
}

TEST(Checks, RandomTracesSatisfyOneStep) {
  Rng rng(71);
  for (int k = 0; k < 15; ++k) {
    const Problem p = random_problem(rng, 30);
    const SinkhornTrace tr = reference_solve(p, Potential::zeros(p.nu().size(), Side::Y));
    const CheckReport r = verify_one_step(tr, p.c_osc(), p.lambda());
    EXPECT_TRUE(r.pass) << r.failures << " failures";
    EXPECT_EQ(r.rows.size() + 1, tr.rows.size());
    EXPECT_FALSE(r.anchor.empty());
  }
}

TEST(Checks, ContractionBoundOneAlwaysPasses) {
  const std::vector<double> d{1.0, 0.5, 0.5, 0.2, 0.0};
  EXPECT_TRUE(verify_contraction(d, std::numeric_limits<double>::infinity()).pass);
  const ContractionReport r = verify_contraction(d, 1.5);
  EXPECT_FALSE(r.pass);
  EXPECT_NEAR(r.bound, 1.0 - 1.0 / 1.5, 1e-15);
}

TEST(Checks, VarianceComparisonOnIdenticalMeasures) {
  Rng rng(72);
  const DiscreteMeasure m(fixtures::random_points(rng, 10, 1), fixtures::random_weights(rng, 10));
  const Vector f = fixtures::random_vector(rng, 10, -1.0, 1.0);
  EXPECT_TRUE(verify_variance_comparison(m, m, f).pass);
}

TEST(Checks, TransformConvexity) {
  Rng rng(73);
  for (int k = 0; k < 20; ++k) {
    const Problem p = random_problem(rng, 20);
    const Potential a = random_potential(rng, p), b = random_potential(rng, p);
    EXPECT_TRUE(verify_transform_convexity(p, a, b, rng.uniform(0.0, 1.0)).pass);
  }
}

TEST(Checks, LocalApproximation) {
  Rng rng(74);
  for (int k = 0; k < 20; ++k) {
    const Problem p = random_problem(rng, 20, 0.2, 2.0);
    const Potential psi = random_potential(rng, p);
    const Vector v = fixtures::random_vector(rng, p.nu().size(), -1.0, 1.0);
    EXPECT_TRUE(verify_local_approximation(p, psi, v, 0.1).pass);
  }
}

TEST(Audits, FiniteDifferences) {
  Rng rng(75);
  for (int k = 0; k < 20; ++k) {
    const Problem p = random_problem(rng, 20, 0.1, 2.0);
    const Potential psi = random_potential(rng, p);
    const Vector v = fixtures::random_vector(rng, p.nu().size(), -1.0, 1.0);
    const FdAudit a = fd_derivative_audit(p, psi, v);
    EXPECT_TRUE(a.pass) << a.max_rel_first << " " << a.max_rel_second;
    const KFdAudit ka = fd_K_audit(p, psi, v);
    EXPECT_LE(ka.rel_first, 1e-5);
    EXPECT_LE(ka.rel_second, 1e-3);
  }
}

TEST(Assumptions, Parsing) {
  EXPECT_EQ(assumption_from_string("A3").kind, AssumptionTag::Kind::A3);
  EXPECT_EQ(assumption_from_string("A1", 2.0, 1.0, 0.5).kappa, 2.0);
  EXPECT_THROW(assumption_from_string("A4"), Error);
  EXPECT_EQ(AssumptionTag::a2().name(), "A2");
}
