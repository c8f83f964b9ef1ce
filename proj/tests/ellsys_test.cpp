#include <cmath>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "vekua/ellsys.hpp"

namespace vekua {
namespace {

using testing::Rng;

EllipticSystem constant_system(double a11, double a12, double a21, double a22) {
  EllipticSystem sys;
  sys.a11 = Expr::number(a11);
  sys.a12 = Expr::number(a12);
  sys.a21 = Expr::number(a21);
  sys.a22 = Expr::number(a22);
  return sys;
}

const Region kUnitSquare{0.0, 1.0, 0.0, 1.0, 5, 5};

TEST(Delta, Examples) {
  const EllipticSystem identity;
  EXPECT_EQ(delta(identity, 0.3, -2.0), 1.0);
  EXPECT_DOUBLE_EQ(delta(constant_system(1, 3, 0, 4), 0, 0), 1.75);
  EXPECT_EQ(delta(constant_system(1, 2, 0, 1), 0, 0), 0.0);
}

TEST(Delta, EvaluationFailureCarriesPoint) {
  EllipticSystem sys;
  sys.a12 = parse_expr("log(x)");
  try {
    delta(sys, -1.0, 2.0);
    FAIL();
  } catch (const EvalError& e) {
    ASSERT_TRUE(e.point().has_value());
    EXPECT_EQ(e.point()->x, -1.0);
    EXPECT_EQ(e.point()->y, 2.0);
  }
}

TEST(Classify, Examples) {
  EXPECT_TRUE(classify(EllipticSystem{}, kUnitSquare).elliptic());
  EXPECT_TRUE(classify(constant_system(1, 3, 0, 4), kUnitSquare).elliptic());

  EllipticSystem sys;
  sys.a11 = parse_expr("x");
  const Classification c = classify(sys, Region{-1, 1, -1, 1, 5, 5});
  ASSERT_FALSE(c.elliptic());
  EXPECT_LE(c.witness->point.x, 0.0);
  EXPECT_EQ(c.witness->reason, EllipticityFailure::A11NonPositive);
  EXPECT_EQ(c.witness->point.x, -1.0);
  EXPECT_EQ(c.witness->point.y, -1.0);
}

TEST(Classify, ReportsEachCondition) {
  EllipticSystem a22_bad = constant_system(1, 0, 0, 1);
  a22_bad.a22 = parse_expr("y - 0.5");
  const Classification c1 = classify(a22_bad, kUnitSquare);
  ASSERT_FALSE(c1.elliptic());
  EXPECT_EQ(c1.witness->reason, EllipticityFailure::A22NonPositive);

  const Classification c2 = classify(constant_system(1, 2, 0, 1), kUnitSquare);
  ASSERT_FALSE(c2.elliptic());
  EXPECT_EQ(c2.witness->reason, EllipticityFailure::DeltaNonPositive);
}

TEST(Classify, RejectsInvalidRegion) {
  EXPECT_THROW(classify(EllipticSystem{}, Region{1, 0, 0, 1, 5, 5}), std::invalid_argument);
  EXPECT_THROW(classify(EllipticSystem{}, Region{0, 1, 0, 1, 1, 5}), std::invalid_argument);
}

TEST(Region, NodesAreInclusiveAndRowMajor) {
  const Region r{-1, 1, 0, 2, 3, 2};
  ASSERT_EQ(r.size(), 6u);
  EXPECT_EQ(r.node(0).x, -1.0);
  EXPECT_EQ(r.node(1).x, 0.0);
  EXPECT_EQ(r.node(2).x, 1.0);
  EXPECT_EQ(r.node(2).y, 0.0);
  EXPECT_EQ(r.node(3).y, 2.0);
  EXPECT_EQ(r.node(5).x, 1.0);
}

TEST(StructureParams, Examples) {
  EXPECT_EQ(structure_params(EllipticSystem{}, 0, 0), (StructureParams{1, 0}));
  EXPECT_EQ(structure_params(constant_system(1, 3, 0, 4), 0, 0), (StructureParams{4, -3}));
  // a11 = a22 and a21 = -a12 lands on the classical algebra.
  EXPECT_EQ(structure_params(constant_system(2, -1, 1, 2), 0, 0), (StructureParams{1, 0}));
  EXPECT_THROW(structure_params(constant_system(0, 0, 0, 1), 0, 0), NonPositiveLeadingCoefficient);
  EXPECT_THROW(structure_params(constant_system(-1, 0, 0, 1), 0, 0), NonPositiveLeadingCoefficient);
}

TEST(Family, Examples) {
  const EllipticSystem id = make_constant_structure_family(1, 0, parse_expr("1"), parse_expr("0"));
  EXPECT_EQ(id.a11, Expr::number(1));
  EXPECT_EQ(id.a22, Expr::number(1));
  EXPECT_EQ(id.a12, Expr::number(0));
  EXPECT_EQ(id.a21, Expr::number(0));
  EXPECT_EQ(id.f1, Expr::number(0));

  const EllipticSystem fam = make_constant_structure_family(4, -2, parse_expr("exp(x)"), parse_expr("y"));
  Rng rng(21);
  for (int k = 0; k < 50; ++k) {
    const double x = rng.uniform(-2, 2), y = rng.uniform(-2, 2);
    const StructureParams s = structure_params(fam, x, y);
    EXPECT_NEAR(s.alpha, 4.0, 1e-14);
    EXPECT_NEAR(s.beta, -2.0, 1e-14);
  }
  EXPECT_THROW(make_constant_structure_family(1, 2, parse_expr("1"), parse_expr("0")), NotElliptic);
  EXPECT_THROW(make_constant_structure_family(-1, 0, parse_expr("1"), parse_expr("0")), NotElliptic);
}

TEST(EllsysProperty, DiscriminantBridge) {
  Rng rng(22);
  for (int k = 0; k < 300; ++k) {
    const auto kind = static_cast<testing::SystemKind>(k % 3);
    const EllipticSystem sys = testing::random_elliptic_system(rng, kind);
    const double x = rng.uniform(-1, 1), y = rng.uniform(-1, 1);
    const StructureParams s = structure_params(sys, x, y);
    const double a11 = eval(sys.a11, x, y);
    const double d = delta(sys, x, y);
    EXPECT_LE(std::abs(discriminant(s) - 4.0 * d / (a11 * a11)), 1e-12 * (1.0 + std::abs(d) / (a11 * a11)));
    EXPECT_GT(s.alpha, 0.0);
    EXPECT_TRUE(is_elliptic(s));
  }
}

TEST(EllsysProperty, ClassifyAgreesWithAlgebraPointwise) {
  Rng rng(23);
  for (int k = 0; k < 500; ++k) {
    const EllipticSystem sys = constant_system(rng.uniform(-0.5, 2), rng.uniform(-2, 2), rng.uniform(-2, 2),
                                               rng.uniform(-0.5, 2));
    const bool classified = !ellipticity_failure_at(sys, 0, 0).has_value();
    const double a11 = eval(sys.a11, 0, 0), a22 = eval(sys.a22, 0, 0);
    const bool algebraic =
        a11 > kPositiveEpsilon && a22 > kPositiveEpsilon && is_elliptic(structure_params(sys, 0, 0));
    EXPECT_EQ(classified, algebraic);
  }
}

TEST(EllsysProperty, FamilyIsConstantOnGrid) {
  Rng rng(24);
  for (int k = 0; k < 20; ++k) {
    const EllipticSystem sys = testing::random_elliptic_system(rng, testing::SystemKind::Family);
    const Region r{-1, 1, -1, 1, 10, 10};
    ASSERT_TRUE(classify(sys, r).elliptic());
    const StructureParams s0 = structure_params(sys, r.node(0).x, r.node(0).y);
    for (std::size_t n = 0; n < r.size(); ++n) {
      const StructureParams s = structure_params(sys, r.node(n).x, r.node(n).y);
      EXPECT_NEAR(s.alpha, s0.alpha, 1e-14 * (1.0 + std::abs(s0.alpha)));
      EXPECT_NEAR(s.beta, s0.beta, 1e-14 * (1.0 + std::abs(s0.beta)));
    }
  }
}

}  // namespace
}  // namespace vekua
