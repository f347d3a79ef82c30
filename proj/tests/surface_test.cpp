#include "deltab/surface.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "deltab/fd_oracle.hpp"

namespace deltab {
namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorKind::invalid_argument;
}

TEST(Catalog, KnownFormulas) {
  EXPECT_EQ(catalog::find("helicoid").formula, "u2*cos(u1), u2*sin(u1), u1");
  EXPECT_EQ(catalog::find("plane").formula, "u1, u2, 0");
  EXPECT_EQ(catalog::find("enneper4").formula,
            "u1 - 4/3*u1^3 + 4*u1*u2^2, u2 - 4/3*u2^3 + 4*u1^2*u2, 2*u1^2 - 2*u2^2");
  EXPECT_EQ(catalog::surfaces().size(), 7u);
}

TEST(Catalog, UnknownName) {
  EXPECT_EQ(kind_of([] { catalog_surface("torus"); }), ErrorKind::unknown_catalog_name);
}

TEST(EvalJet, HelicoidAtOrigin) {
  const SurfaceJet j = eval_jet(catalog_surface("helicoid"), Point{0.0, 0.0}, 1);
  EXPECT_EQ(j.partial(0, 0), (Vec3{0, 0, 0}));
  EXPECT_EQ(j.partial(1, 0), (Vec3{0, 0, 1}));
  EXPECT_EQ(j.partial(0, 1), (Vec3{1, 0, 0}));
  EXPECT_THROW(j.partial(2, 0), Error);
}

TEST(EvalJet, PlaneHasNoCurvatureTerms) {
  const SurfaceJet j = eval_jet(catalog_surface("plane"), Point{0.3, -0.4}, 4);
  for (int d = 2; d <= 4; ++d)
    for (int b = 0; b <= d; ++b) EXPECT_EQ(norm(j.partial(d - b, b)), 0.0);
}

TEST(EvalJet, Errors) {
  const SurfaceDef plane = catalog_surface("plane");
  EXPECT_EQ(kind_of([&] { eval_jet(plane, Point{1.5, 0.0}, 2); }), ErrorKind::point_outside_domain);
  EXPECT_EQ(kind_of([&] { eval_jet(plane, Point{0.0, 0.0}, 0); }), ErrorKind::invalid_argument);
  EXPECT_EQ(kind_of([&] { eval_jet(plane, Point{0.0, 0.0}, 5); }), ErrorKind::invalid_argument);
  const SurfaceDef fold = parse_surface_file("u1, u1, 0");
  EXPECT_EQ(kind_of([&] { eval_jet(fold, Point{0.1, 0.2}, 2); }), ErrorKind::rank_deficient_jacobian);
  // polar coordinates degenerate at the centre
  const SurfaceDef polar = parse_surface_file("u1*cos(u2), u1*sin(u2), 0");
  EXPECT_EQ(kind_of([&] { eval_jet(polar, Point{0.0, 0.5}, 2); }), ErrorKind::rank_deficient_jacobian);
}

// Re-entering each catalog formula through the DSL reproduces the
// hand-written derivatives.
TEST(EvalJet, DslReentryMatchesClosedForm) {
  std::mt19937 rng(3);
  for (const auto& entry : catalog::surfaces()) {
    const SurfaceDef closed = SurfaceDef::from_catalog(entry.name);
    const SurfaceDef dsl = SurfaceDef::from_program(expr::parse(entry.formula), entry.default_domain);
    const Domain& d = entry.default_domain;
    std::uniform_real_distribution<double> c1(d.u1_min, d.u1_max), c2(d.u2_min, d.u2_max);
    for (int trial = 0; trial < 25; ++trial) {
      const Point p{c1(rng), c2(rng)};
      const SurfaceJet a = eval_jet(closed, p, 4), b = eval_jet(dsl, p, 4);
      for (int i = 0; i < SurfaceJet::size; ++i)
        for (int k = 0; k < 3; ++k) {
          const double want = a.partials()[i][k];
          EXPECT_NEAR(b.partials()[i][k], want, 1e-12 * std::fmax(1.0, std::fabs(want)))
              << entry.name << " slot " << i;
        }
    }
  }
}

TEST(EvalJet, Enneper4AgreesWithFiniteDifferences) {
  const SurfaceDef s = catalog_surface("enneper4");
  for (const Point p : {Point{0.0, 0.0}, Point{0.3, -0.2}, Point{-0.6, 0.5}}) {
    const SurfaceJet a = eval_jet(s, p, 4), f = fd::fd_jet(s, p, 4);
    for (int i = 0; i < SurfaceJet::size; ++i) {
      const double scale = std::fmax(1.0, max_abs(a.partials()[i]));
      EXPECT_LE(max_abs(a.partials()[i] - f.partials()[i]), 1e-4 * scale) << "slot " << i;
    }
  }
}

TEST(SurfaceFile, CommentsAndDomain) {
  const SurfaceDef s = parse_surface_file(
      "# helicoid, narrow strip\n"
      "u2*cos(u1), u2*sin(u1), u1   # the equation\n"
      "\n"
      "domain: -1 1 -0.5 0.5\n",
      "strip");
  EXPECT_EQ(s.name(), "strip");
  EXPECT_EQ(s.domain().u2_max, 0.5);
  EXPECT_EQ(s.domain().u1_min, -1.0);
  const Vec3 r = s.position(Point{0.2, 0.4});
  EXPECT_DOUBLE_EQ(r.x, 0.4 * std::cos(0.2));
}

TEST(SurfaceFile, DefaultDomainIsUnitSquare) {
  const SurfaceDef s = parse_surface_file("u1, u2, u1*u2");
  EXPECT_EQ(s.domain().u1_min, -1.0);
  EXPECT_EQ(s.domain().u1_max, 1.0);
  EXPECT_EQ(s.domain().u2_min, -1.0);
  EXPECT_EQ(s.domain().u2_max, 1.0);
}

TEST(SurfaceFile, Errors) {
  EXPECT_EQ(kind_of([] { parse_surface_file("# nothing\n"); }), ErrorKind::syntax_error);
  EXPECT_EQ(kind_of([] { parse_surface_file("u1, u2, 0\nu1, u2, 1\n"); }), ErrorKind::syntax_error);
  EXPECT_EQ(kind_of([] { parse_surface_file("u1, u2, 0\ndomain: 1 2 3\n"); }), ErrorKind::syntax_error);
  EXPECT_EQ(kind_of([] { parse_surface_file("u1, u2, 0\ndomain: 1 0 0 1\n"); }), ErrorKind::invalid_argument);
  EXPECT_EQ(kind_of([] { load_surface_file("/nonexistent/surface.txt"); }), ErrorKind::io_error);
  try {
    parse_surface_file("# header\nu1 + , u2, 0\n");
    FAIL();
  } catch (const Error& e) {
    ASSERT_TRUE(e.offset().has_value());
    EXPECT_EQ(*e.offset(), 12u);  // the '+' on the second line
  }
}

TEST(Domain, Checked) {
  EXPECT_THROW(Domain::checked(0, 0, 0, 1), Error);
  EXPECT_THROW(Domain::checked(0, 1, 0, NAN), Error);
  const Domain d = Domain::checked(0, 2, -1, 1);
  EXPECT_TRUE(d.contains(Point{2.0, 1.0}));
  EXPECT_DOUBLE_EQ(d.distance_to_boundary(Point{0.5, 0.0}), 0.5);
}

}  // namespace
}  // namespace deltab
