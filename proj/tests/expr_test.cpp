#include <cmath>
#include <string>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "vekua/expr.hpp"

namespace vekua {
namespace {

using testing::num;
using testing::Rng;

Expr pow_(Expr a, Expr b) { return Expr::binary(Op::Pow, std::move(a), std::move(b)); }

TEST(ParseExpr, BuildsExpectedTrees) {
  EXPECT_EQ(parse_expr("x^2 + sin(y)"), pow_(Expr::x(), num(2)) + Expr::call(Func::Sin, Expr::y()));
  EXPECT_EQ(parse_expr("exp(-x*y)"), Expr::call(Func::Exp, -(Expr::x() * Expr::y())));
}

TEST(ParseExpr, Precedence) {
  EXPECT_EQ(parse_expr("-x^2"), -pow_(Expr::x(), num(2)));
  EXPECT_EQ(parse_expr("2^3^2"), pow_(num(2), pow_(num(3), num(2))));
  EXPECT_EQ(parse_expr("x - y - 1"), (Expr::x() - Expr::y()) - num(1));
  EXPECT_EQ(parse_expr("8/4/2"), (num(8) / num(4)) / num(2));
  EXPECT_EQ(parse_expr("1 + 2*x"), num(1) + num(2) * Expr::x());
  EXPECT_EQ(parse_expr("x^-y"), pow_(Expr::x(), -Expr::y()));
  EXPECT_EQ(parse_expr("-x*y"), -(Expr::x() * Expr::y()));
  EXPECT_EQ(parse_expr("2*-x"), num(2) * -Expr::x());
  EXPECT_EQ(parse_expr("-x + y"), -Expr::x() + Expr::y());
  EXPECT_EQ(parse_expr("(x + y)*2"), (Expr::x() + Expr::y()) * num(2));
  EXPECT_DOUBLE_EQ(eval(parse_expr("2^3^2"), 0, 0), 512.0);
  EXPECT_DOUBLE_EQ(eval(parse_expr("-2^2"), 0, 0), -4.0);
}

TEST(ParseExpr, Numbers) {
  EXPECT_EQ(parse_expr("1.5e-3"), num(1.5e-3));
  EXPECT_EQ(parse_expr(".25"), num(0.25));
  EXPECT_EQ(parse_expr("3."), num(3.0));
  EXPECT_EQ(parse_expr("  2E+2 "), num(200.0));
}

size_t syntax_offset(const std::string& text) {
  try {
    parse_expr(text);
  } catch (const SyntaxError& e) {
    return e.offset();
  }
  ADD_FAILURE() << "no syntax error for '" << text << "'";
  return std::string::npos;
}

TEST(ParseExpr, SyntaxErrorsCarryOffsets) {
  EXPECT_EQ(syntax_offset("1 +"), 3u);
  EXPECT_EQ(syntax_offset(""), 0u);
  EXPECT_EQ(syntax_offset("(x + 1"), 6u);
  EXPECT_EQ(syntax_offset("x y"), 2u);
  EXPECT_EQ(syntax_offset("sin x"), 4u);
  EXPECT_EQ(syntax_offset("2 ** x"), 3u);
  EXPECT_EQ(syntax_offset("1e"), 1u);
  EXPECT_EQ(syntax_offset("x(1)"), 1u);
  EXPECT_EQ(syntax_offset("+x"), 0u);
}

TEST(ParseExpr, UnknownIdentifiers) {
  EXPECT_THROW(parse_expr("z + 1"), UnknownIdentifier);
  EXPECT_THROW(parse_expr("pi"), UnknownIdentifier);
  try {
    parse_expr("x + cosh(y)");
    FAIL();
  } catch (const UnknownIdentifier& e) {
    EXPECT_EQ(e.name(), "cosh");
    EXPECT_EQ(e.offset(), 4u);
  }
}

TEST(Eval, Examples) {
  EXPECT_DOUBLE_EQ(eval(parse_expr("x^2 + sin(y)"), 2, 0), 4.0);
  EXPECT_THROW(eval(parse_expr("1/x"), 0, 1), DomainError);
  EXPECT_DOUBLE_EQ(eval(parse_expr("exp(0)"), 3, -7), 1.0);
}

TEST(Eval, DomainErrors) {
  EXPECT_THROW(eval(parse_expr("log(x)"), 0, 0), DomainError);
  EXPECT_THROW(eval(parse_expr("log(x)"), -1, 0), DomainError);
  EXPECT_THROW(eval(parse_expr("sqrt(x)"), -1, 0), DomainError);
  EXPECT_NO_THROW(eval(parse_expr("sqrt(x)"), 0, 0));
  EXPECT_THROW(eval(parse_expr("x^0.5"), -1, 0), DomainError);
  EXPECT_THROW(eval(parse_expr("x^-1"), 0, 0), DomainError);
  EXPECT_THROW(eval(parse_expr("x^y"), -1, 2), DomainError);
  EXPECT_THROW(eval(parse_expr("exp(exp(x))"), 10, 0), DomainError);
  EXPECT_DOUBLE_EQ(eval(parse_expr("x^3"), -2, 0), -8.0);
  EXPECT_DOUBLE_EQ(eval(parse_expr("x^y"), 2, 3), 8.0);
}

TEST(EvalJet, Examples) {
  EXPECT_EQ(eval_jet(parse_expr("x^2*y"), 2, 3), (Jet2{12, 12, 4}));
  EXPECT_EQ(eval_jet(parse_expr("sin(x)"), 0, 5), (Jet2{0, 1, 0}));
  const Expr e = parse_expr("exp(x*y)");
  const Jet2 j = eval_jet(e, 1, 2);
  const Partials fd = fd_partials(e, 1, 2, 1e-6);
  EXPECT_LE(std::abs(j.dx - fd.dx), 1e-6 * std::abs(j.dx));
  EXPECT_LE(std::abs(j.dy - fd.dy), 1e-6 * std::abs(j.dy));
}

TEST(EvalJet, DerivativeDomainErrors) {
  EXPECT_THROW(eval_jet(parse_expr("abs(x)"), 0, 0), DomainError);
  EXPECT_NO_THROW(eval(parse_expr("abs(x)"), 0, 0));
  EXPECT_THROW(eval_jet(parse_expr("sqrt(x)"), 0, 0), DomainError);
  EXPECT_THROW(eval_jet(parse_expr("x^0.5"), 0, 0), DomainError);
  EXPECT_EQ(eval_jet(parse_expr("abs(x)"), -2, 0), (Jet2{2, -1, 0}));
  EXPECT_EQ(eval_jet(parse_expr("x^0"), 0, 0), (Jet2{1, 0, 0}));
}

TEST(FdPartials, Examples) {
  const Partials a = fd_partials(parse_expr("x"), 0.7, -0.2, 1e-5);
  EXPECT_NEAR(a.dx, 1.0, 1e-10);
  EXPECT_NEAR(a.dy, 0.0, 1e-10);
  const Partials b = fd_partials(parse_expr("y^2"), 0, 3, 1e-5);
  EXPECT_NEAR(b.dx, 0.0, 1e-8);
  EXPECT_NEAR(b.dy, 6.0, 1e-8);
  EXPECT_THROW(fd_partials(parse_expr("x"), 0, 0, 0.0), std::invalid_argument);
}

TEST(Print, CanonicalForms) {
  EXPECT_EQ(parse_expr("x^2 + sin(y)").to_string(), "x^2 + sin(y)");
  EXPECT_EQ(parse_expr("x - (y - 1)").to_string(), "x - (y - 1)");
  EXPECT_EQ(parse_expr("(x - y) - 1").to_string(), "x - y - 1");
  EXPECT_EQ(parse_expr("(-x)^2").to_string(), "(-x)^2");
  EXPECT_EQ(parse_expr("x^(y^2)").to_string(), "x^y^2");
  EXPECT_EQ(parse_expr("(x^y)^2").to_string(), "(x^y)^2");
  EXPECT_EQ(parse_expr("x - -y").to_string(), "x - -y");
  EXPECT_EQ(parse_expr("(-x)*y").to_string(), "(-x)*y");
  EXPECT_EQ(parse_expr("-x*y").to_string(), "-x*y");
  EXPECT_EQ(parse_expr("x^-y").to_string(), "x^(-y)");
  EXPECT_EQ(parse_expr("0.1").to_string(), "0.1");
  EXPECT_EQ((num(-3) * Expr::x()).to_string(), "(-3)*x");
}

TEST(ExprProperty, PrintParseRoundTrip) {
  Rng rng(11);
  for (int k = 0; k < 500; ++k) {
    const Expr e = testing::random_expr(rng, 5);
    const Expr once = parse_expr(e.to_string());
    EXPECT_EQ(parse_expr(once.to_string()), once) << once.to_string();
    // Programmatic trees differ from parsed ones only in negative literals.
    EXPECT_DOUBLE_EQ(eval(once, 0.3, -0.4), eval(e, 0.3, -0.4));
  }
}

TEST(ExprProperty, EachFunctionJetMatchesFiniteDifferences) {
  const char* const cases[] = {"sin(x*y + x)",      "cos(x - 2*y)",   "tan(0.5*x + 0.3*y)", "exp(x*y)",
                               "log(2 + x + y^2)", "sqrt(3 + x*y)", "tanh(2*x - y)",      "abs(x - y + 3)",
                               "abs(x - y - 3)",    "x^3*y^2",       "(2 + x)^(1 + y)",    "(2 + x)^1.5",
                               "x/(2 + y)"};
  Rng rng(12);
  for (const char* text : cases) {
    const Expr e = parse_expr(text);
    for (int k = 0; k < 1000; ++k) {
      const double x = rng.uniform(-1.0, 1.0), y = rng.uniform(-1.0, 1.0);
      const Jet2 j = eval_jet(e, x, y);
      const Partials fd = fd_partials(e, x, y, 1e-5);
      EXPECT_LE(std::abs(j.dx - fd.dx), 1e-6 * (1.0 + std::abs(j.dx))) << text;
      EXPECT_LE(std::abs(j.dy - fd.dy), 1e-6 * (1.0 + std::abs(j.dy))) << text;
      EXPECT_DOUBLE_EQ(j.value, eval(e, x, y)) << text;
    }
  }
}

TEST(ExprProperty, SumAndProductRulesOnJets) {
  Rng rng(13);
  for (int k = 0; k < 200; ++k) {
    const Expr a = testing::random_expr(rng, 3), b = testing::random_expr(rng, 3);
    const double x = rng.uniform(-1.0, 1.0), y = rng.uniform(-1.0, 1.0);
    const Jet2 ja = eval_jet(a, x, y), jb = eval_jet(b, x, y);
    const Jet2 sum = eval_jet(a + b, x, y);
    const Jet2 prod = eval_jet(a * b, x, y);
    EXPECT_EQ(sum, ja + jb);
    EXPECT_EQ(prod, ja * jb);
  }
}

}  // namespace
}  // namespace vekua
