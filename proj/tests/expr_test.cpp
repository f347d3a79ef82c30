#include "deltab/expr.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <string>

#include "support/symbolic.hpp"

namespace deltab::expr {
namespace {

ErrorKind kind_of(std::string_view text) {
  try {
    parse(text);
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected a parse error for '" << text << "'";
  return ErrorKind::invalid_argument;
}

double eval1(std::string_view text, double u1, double u2 = 0.0) {
  return evaluate(parse_expression(text), u1, u2);
}

TEST(Parse, HelicoidEvaluatesToClosedForm) {
  const ExprAst ast = parse("u2*cos(u1), u2*sin(u1), u1");
  const Vec3 r = evaluate(ast, 0.7, 1.3);
  EXPECT_DOUBLE_EQ(r.x, 1.3 * std::cos(0.7));
  EXPECT_DOUBLE_EQ(r.y, 1.3 * std::sin(0.7));
  EXPECT_DOUBLE_EQ(r.z, 0.7);
}

TEST(Parse, BracesAndAliasesAreAccepted) {
  const Vec3 a = evaluate(parse("{x1 + x2, x1 * x2, pi}"), 2.0, 3.0);
  EXPECT_EQ(a.x, 5.0);
  EXPECT_EQ(a.y, 6.0);
  EXPECT_DOUBLE_EQ(a.z, std::acos(-1.0));
}

TEST(Parse, WrongComponentCount) {
  EXPECT_EQ(kind_of("u1, u2"), ErrorKind::wrong_component_count);
  EXPECT_EQ(kind_of("u1, u2, 0, 1"), ErrorKind::wrong_component_count);
}

TEST(Parse, DanglingOperatorReportsItsOffset) {
  try {
    parse("u1^2 + , u2, 0");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::syntax_error);
    ASSERT_TRUE(e.offset().has_value());
    EXPECT_EQ(*e.offset(), 5u);
  }
}

TEST(Parse, UnknownIdentifier) {
  EXPECT_EQ(kind_of("foo(u1), u2, 0"), ErrorKind::unknown_identifier);
  EXPECT_EQ(kind_of("u3, u2, 0"), ErrorKind::unknown_identifier);
}

TEST(Parse, SyntaxErrors) {
  for (const char* bad : {"", "(u1, u2, 0", "u1), u2, 0", "u1 u2, 0, 0", "u1^2.5, 0, 0", "sin u1, 0, 0",
                          "u1,, 0", "{u1, u2, 0", "1e, 0, 0"})
    EXPECT_EQ(kind_of(bad), ErrorKind::syntax_error) << bad;
}

TEST(Parse, PrecedenceAndAssociativity) {
  EXPECT_EQ(eval1("-u1^2", 3.0), -9.0);
  EXPECT_EQ(eval1("8/2/2", 0.0), 2.0);
  EXPECT_EQ(eval1("2-3-4", 0.0), -5.0);
  EXPECT_EQ(eval1("1+2*3", 0.0), 7.0);
  EXPECT_EQ(eval1("(1+2)*3", 0.0), 9.0);
  EXPECT_EQ(eval1("u1^-1", 4.0), 0.25);
  EXPECT_EQ(eval1("2*u1^2*u2", 3.0, 0.5), 9.0);
  EXPECT_EQ(eval1("1.5e1", 0.0), 15.0);
}

TEST(Parse, DeepNestingIsRejectedNotCrashed) {
  std::string deep(5000, '(');
  deep += "u1";
  deep += std::string(5000, ')');
  EXPECT_THROW(parse_expression(deep), Error);
  std::string chain = "u1";
  for (int i = 0; i < 2000; ++i) chain += "+u1";
  EXPECT_THROW(parse_expression(chain), Error);
}

// Whatever bytes come in, the parser either returns a tree or throws a
// structured Error.
TEST(Parse, TotalOnGarbage) {
  std::mt19937 rng(7);
  const std::string alphabet = "u12x ()+-*/^,{}.e0123456789sincoexplnqrtah#\t\n\x01\xff";
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1), len(0, 40);
  int parsed = 0;
  for (int trial = 0; trial < 20000; ++trial) {
    std::string s;
    for (std::size_t n = len(rng); n > 0; --n) s += alphabet[pick(rng)];
    try {
      parse(s);
      ++parsed;
    } catch (const Error&) {
    } catch (...) {
      FAIL() << "unstructured exception for '" << s << "'";
    }
  }
  SUCCEED() << parsed << " inputs parsed";
}

TEST(Print, RoundTripPreservesValues) {
  deltab::testing::TreeGenerator gen(11, false);
  for (int trial = 0; trial < 300; ++trial) {
    const NodePtr f = gen(5);
    const std::string text = print(f);
    const NodePtr g = parse_expression(text);
    EXPECT_EQ(print(g), text);
    const double a = evaluate(f, 0.3, -0.7);
    const double b = evaluate(g, 0.3, -0.7);
    EXPECT_EQ(a, b) << text;
  }
}

TEST(DiffEval, SquareOfFirstCoordinate) {
  const SurfaceJet j = diff_eval(parse("u1^2, 0, 0"), Point{3.0, 0.0}, 4);
  EXPECT_EQ(j.partial(0, 0).x, 9.0);
  EXPECT_EQ(j.partial(1, 0).x, 6.0);
  EXPECT_EQ(j.partial(2, 0).x, 2.0);
  EXPECT_EQ(j.partial(3, 0).x, 0.0);
  EXPECT_EQ(j.partial(0, 1).x, 0.0);
  EXPECT_EQ(j.partial(1, 1).x, 0.0);
}

TEST(DiffEval, LogAtZeroIsADomainError) {
  try {
    diff_eval(parse("ln(u1), 0, 0"), Point{0.0, 0.0}, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::domain_error);
  }
  EXPECT_THROW(diff_eval(parse("1/u1, 0, 0"), Point{0.0, 0.0}, 2), Error);
  EXPECT_THROW(diff_eval(parse("sqrt(u1 - 1), 0, 0"), Point{0.5, 0.0}, 2), Error);
}

TEST(DiffEval, HelicoidMatchesClosedForm) {
  const ExprAst ast = parse("u2*cos(u1), u2*sin(u1), u1");
  for (const Point p : {Point{0.0, 0.0}, Point{0.4, 1.1}, Point{-2.5, -1.7}}) {
    const SurfaceJet j = diff_eval(ast, p, 4);
    const double t = p.u2;
    for (int a = 0; a <= 4; ++a) {
      // d1^a of (cos, sin) rotated by a quarter turn per derivative
      const double ca = std::cos(p.u1 + a * M_PI / 2), sa = std::sin(p.u1 + a * M_PI / 2);
      const Vec3 want0{t * ca, t * sa, a == 0 ? p.u1 : (a == 1 ? 1.0 : 0.0)};
      const Vec3 got0 = j.partial(a, 0);
      for (int k = 0; k < 3; ++k) EXPECT_NEAR(got0[k], want0[k], 1e-12 * (1 + std::fabs(want0[k])));
      if (a <= 3) {
        const Vec3 got1 = j.partial(a, 1);
        EXPECT_NEAR(got1.x, ca, 1e-12);
        EXPECT_NEAR(got1.y, sa, 1e-12);
        EXPECT_EQ(got1.z, 0.0);
      }
      if (a <= 2) {
        EXPECT_EQ(norm(j.partial(a, 2)), 0.0);
      }
    }
  }
}

TEST(DiffEval, InvalidOrder) {
  EXPECT_THROW(diff_eval(parse("u1, u2, 0"), Point{0, 0}, 5), Error);
}

class RandomTrees : public ::testing::TestWithParam<bool> {};

// Jet arithmetic against the symbolic differentiator on random trees.
TEST_P(RandomTrees, JetPartialsMatchSymbolic) {
  const bool polynomial = GetParam();
  deltab::testing::TreeGenerator gen(polynomial ? 101 : 202, polynomial);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> coord(-1.2, 1.2);
  for (int trial = 0; trial < 60; ++trial) {
    const NodePtr f = gen(4);
    const double p1 = coord(rng), p2 = coord(rng);
    const auto j = evaluate(f, JetD<4>::variable(0, p1), JetD<4>::variable(1, p2));
    for (int d = 0; d <= 4; ++d)
      for (int b = 0; b <= d; ++b) {
        const double want = evaluate(deltab::testing::partial(f, d - b, b), p1, p2);
        EXPECT_NEAR(j.partial(d - b, b), want, 1e-12 * std::fmax(1.0, std::fabs(want)))
            << print(f) << " at (" << p1 << ", " << p2 << ") partial " << d - b << "," << b;
      }
  }
}

INSTANTIATE_TEST_SUITE_P(Trees, RandomTrees, ::testing::Values(true, false),
                         [](const auto& info) { return info.param ? "Polynomial" : "Transcendental"; });

}  // namespace
}  // namespace deltab::expr
