#pragma once

#include <array>
#include <cmath>
#include <fstream>
#include <memory>
#include <optional>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "deltab/error.hpp"
#include "deltab/expr.hpp"
#include "deltab/surface_jet.hpp"
#include "deltab/vec.hpp"

namespace deltab {

/// Parameter rectangle [u1_min, u1_max] x [u2_min, u2_max].
struct Domain {
  double u1_min{-1.0}, u1_max{1.0}, u2_min{-1.0}, u2_max{1.0};

  static Domain checked(double a, double b, double c, double d) {
    Domain dom{a, b, c, d};
    if (!(std::isfinite(a) && std::isfinite(b) && std::isfinite(c) && std::isfinite(d)) ||
        !(b > a) || !(d > c))
      throw Error(ErrorKind::invalid_argument, "domain must have positive finite side lengths");
    return dom;
  }

  bool contains(Point p) const {
    return p.u1 >= u1_min && p.u1 <= u1_max && p.u2 >= u2_min && p.u2 <= u2_max;
  }

  double distance_to_boundary(Point p) const {
    return std::fmin(std::fmin(p.u1 - u1_min, u1_max - p.u1), std::fmin(p.u2 - u2_min, u2_max - p.u2));
  }
};

namespace catalog {

enum class Factor { constant, monomial, sin, cos, sinh, cosh };

/// One factor f(x) of a separable term; `power` is used by monomials.
struct FactorSpec {
  Factor kind{Factor::constant};
  int power{0};
};

/// k-th derivative of a factor at x, written out in closed form.
inline double derivative(FactorSpec f, int k, double x) {
  switch (f.kind) {
    case Factor::constant:
      return k == 0 ? 1.0 : 0.0;
    case Factor::monomial: {
      if (k > f.power) return 0.0;
      double c = 1.0;
      for (int i = 0; i < k; ++i) c *= f.power - i;
      return c * std::pow(x, f.power - k);
    }
    case Factor::sin:
      switch (k % 4) {
        case 0: return std::sin(x);
        case 1: return std::cos(x);
        case 2: return -std::sin(x);
        default: return -std::cos(x);
      }
    case Factor::cos:
      switch (k % 4) {
        case 0: return std::cos(x);
        case 1: return -std::sin(x);
        case 2: return -std::cos(x);
        default: return std::sin(x);
      }
    case Factor::sinh: return k % 2 == 0 ? std::sinh(x) : std::cosh(x);
    case Factor::cosh: return k % 2 == 0 ? std::cosh(x) : std::sinh(x);
  }
  return 0.0;
}

/// coefficient * f(u1) * h(u2)
struct Term {
  double coefficient{1.0};
  FactorSpec f;
  FactorSpec h;
};

using Component = std::vector<Term>;

/// A closed-form catalog surface: every coordinate is a sum of separable
/// terms, so d1^a d2^b r is the sum of coefficient * f^(a)(u1) * h^(b)(u2).
struct CatalogSurface {
  std::string name;
  std::string formula;  // DSL re-entry of the same surface
  Domain default_domain;
  std::array<Component, 3> components;

  Vec3 partial(int a, int b, Point p) const {
    Vec3 out;
    for (int c = 0; c < 3; ++c) {
      double sum = 0.0;
      for (const Term& t : components[c])
        sum += t.coefficient * derivative(t.f, a, p.u1) * derivative(t.h, b, p.u2);
      out[c] = sum;
    }
    return out;
  }
};

namespace detail {
inline constexpr FactorSpec one{Factor::constant, 0};
inline constexpr FactorSpec mono(int p) { return {Factor::monomial, p}; }
inline constexpr FactorSpec sin_{Factor::sin, 0};
inline constexpr FactorSpec cos_{Factor::cos, 0};
inline constexpr FactorSpec cosh_{Factor::cosh, 0};
}  // namespace detail

inline const std::vector<CatalogSurface>& surfaces() {
  using namespace detail;
  constexpr double pi = std::numbers::pi;
  static const std::vector<CatalogSurface> all = {
      {"plane", "u1, u2, 0", {-1, 1, -1, 1}, {{{{1, mono(1), one}}, {{1, one, mono(1)}}, {}}}},
      {"cylinder",
       "cos(u1), sin(u1), u2",
       {-pi, pi, -1, 1},
       {{{{1, cos_, one}}, {{1, sin_, one}}, {{1, one, mono(1)}}}}},
      {"helicoid",
       "u2*cos(u1), u2*sin(u1), u1",
       {-pi, pi, -2, 2},
       {{{{1, cos_, mono(1)}}, {{1, sin_, mono(1)}}, {{1, mono(1), one}}}}},
      {"enneper4",
       "u1 - 4/3*u1^3 + 4*u1*u2^2, u2 - 4/3*u2^3 + 4*u1^2*u2, 2*u1^2 - 2*u2^2",
       {-1, 1, -1, 1},
       {{{{1, mono(1), one}, {-4.0 / 3.0, mono(3), one}, {4, mono(1), mono(2)}},
         {{1, one, mono(1)}, {-4.0 / 3.0, one, mono(3)}, {4, mono(2), mono(1)}},
         {{2, mono(2), one}, {-2, one, mono(2)}}}}},
      {"catenoid",
       "cosh(u2)*cos(u1), cosh(u2)*sin(u1), u2",
       {-pi, pi, -1, 1},
       {{{{1, cos_, cosh_}}, {{1, sin_, cosh_}}, {{1, one, mono(1)}}}}},
      {"sphere",
       "cos(u2)*cos(u1), cos(u2)*sin(u1), sin(u2)",
       {-pi, pi, -pi / 2 + 0.1, pi / 2 - 0.1},
       {{{{1, cos_, cos_}}, {{1, sin_, cos_}}, {{1, one, sin_}}}}},
      {"paraboloid",
       "u1, u2, u1^2 + u2^2",
       {-1, 1, -1, 1},
       {{{{1, mono(1), one}}, {{1, one, mono(1)}}, {{1, mono(2), one}, {1, one, mono(2)}}}}},
  };
  return all;
}

inline const CatalogSurface& find(std::string_view name) {
  for (const auto& s : surfaces())
    if (s.name == name) return s;
  throw Error(ErrorKind::unknown_catalog_name, "no catalog surface named '" + std::string(name) + "'");
}

}  // namespace catalog

/// A parametric surface r(u1, u2) over a rectangle: either a closed-form
/// catalog entry or a parsed DSL program. Immutable and cheap to copy.
class SurfaceDef {
 public:
  static SurfaceDef from_catalog(std::string_view name) {
    const catalog::CatalogSurface& s = catalog::find(name);
    return SurfaceDef(s.name, s.default_domain, &s);
  }

  static SurfaceDef from_program(expr::ExprAst program, Domain domain, std::string name = "dsl") {
    Domain::checked(domain.u1_min, domain.u1_max, domain.u2_min, domain.u2_max);
    return SurfaceDef(std::move(name), domain, std::make_shared<const expr::ExprAst>(std::move(program)));
  }

  SurfaceDef with_domain(Domain domain) const {
    Domain::checked(domain.u1_min, domain.u1_max, domain.u2_min, domain.u2_max);
    SurfaceDef copy = *this;
    copy.domain_ = domain;
    return copy;
  }

  const std::string& name() const { return name_; }
  const Domain& domain() const { return domain_; }

  const catalog::CatalogSurface* catalog_entry() const {
    const auto* p = std::get_if<const catalog::CatalogSurface*>(&source_);
    return p ? *p : nullptr;
  }
  const expr::ExprAst* program() const {
    const auto* p = std::get_if<std::shared_ptr<const expr::ExprAst>>(&source_);
    return p ? p->get() : nullptr;
  }

  /// r(u1, u2) in plain double arithmetic (no derivative machinery).
  Vec3 position(Point p) const {
    if (const auto* c = catalog_entry()) return c->partial(0, 0, p);
    return expr::evaluate(*program(), p.u1, p.u2);
  }

 private:
  using Source = std::variant<const catalog::CatalogSurface*, std::shared_ptr<const expr::ExprAst>>;

  SurfaceDef(std::string name, Domain domain, Source source)
      : name_(std::move(name)), domain_(domain), source_(std::move(source)) {}

  std::string name_;
  Domain domain_;
  Source source_;
};

inline SurfaceDef catalog_surface(std::string_view name) { return SurfaceDef::from_catalog(name); }

/// Exact partial derivatives of r up to `order` at `point`: hand-written
/// closed forms for catalog surfaces, jet arithmetic for DSL programs.
inline SurfaceJet eval_jet(const SurfaceDef& def, Point point, int order) {
  if (order < 1 || order > SurfaceJet::max_order)
    throw Error(ErrorKind::invalid_argument, "jet order must be in 1..4");
  if (!def.domain().contains(point))
    throw Error(ErrorKind::point_outside_domain,
                "(" + std::to_string(point.u1) + ", " + std::to_string(point.u2) + ") is outside '" +
                    def.name() + "'");
  if (const auto* c = def.catalog_entry()) {
    std::array<Vec3, SurfaceJet::size> partials{};
    for (int d = 0; d <= order; ++d)
      for (int b = 0; b <= d; ++b) partials[SurfaceJet::index(d - b, b)] = c->partial(d - b, b, point);
    return require_rank2(SurfaceJet(point, order, partials));
  }
  return require_rank2(expr::diff_eval(*def.program(), point, order));
}

/// Parse a surface-definition file: '#' starts a comment, the first
/// remaining line is the vector equation, an optional `domain: a b c d`
/// line sets the parameter rectangle (default [-1,1]^2).
inline SurfaceDef parse_surface_file(std::string_view text, std::string name = "dsl") {
  std::optional<expr::ExprAst> program;
  Domain domain;
  std::size_t line_start = 0;
  while (line_start <= text.size()) {
    std::size_t line_end = text.find('\n', line_start);
    if (line_end == std::string_view::npos) line_end = text.size();
    std::string_view line = text.substr(line_start, line_end - line_start);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first != std::string_view::npos) {
      const auto last = line.find_last_not_of(" \t\r");
      const std::string_view content = line.substr(first, last - first + 1);
      const std::size_t content_offset = line_start + first;
      if (content.substr(0, 7) == "domain:") {
        std::istringstream in{std::string(content.substr(7))};
        double a, b, c, d;
        std::string extra;
        if (!(in >> a >> b >> c >> d) || (in >> extra))
          throw Error(ErrorKind::syntax_error, "domain line needs four numbers", content_offset);
        domain = Domain::checked(a, b, c, d);
      } else if (!program) {
        try {
          program = expr::parse(content);
        } catch (const Error& e) {
          if (!e.offset()) throw;
          throw Error(e.kind(), "line at offset " + std::to_string(content_offset) + ": " + e.message(),
                      content_offset + *e.offset());
        }
      } else {
        throw Error(ErrorKind::syntax_error, "unexpected extra line", content_offset);
      }
    }
    line_start = line_end + 1;
  }
  if (!program) throw Error(ErrorKind::syntax_error, "no vector equation found", 0);
  return SurfaceDef::from_program(std::move(*program), domain, std::move(name));
}

inline SurfaceDef load_surface_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io_error, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_surface_file(buf.str(), path);
}

}  // namespace deltab
