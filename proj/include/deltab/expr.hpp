#pragma once

// Vector-equation DSL: "f1, f2, f3" in the parameters u1, u2 (aliases x1, x2).
//
//   surface  := ['{'] expr ',' expr ',' expr ['}']
//   expr     := term (('+' | '-') term)*
//   term     := unary (('*' | '/') unary)*
//   unary    := ('-' | '+') unary | power
//   power    := primary ('^' exponent)*
//   exponent := ['-' | '+'] INTEGER | '(' ['-' | '+'] INTEGER ')'
//   primary  := NUMBER | 'pi' | variable | function '(' expr ')' | '(' expr ')'

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <memory>
#include <numbers>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "deltab/error.hpp"
#include "deltab/jet.hpp"
#include "deltab/surface_jet.hpp"
#include "deltab/vec.hpp"

namespace deltab::expr {

enum class NodeKind { constant, variable, unary, binary, power };
enum class UnaryFn { neg, sin, cos, tan, exp, ln, sqrt, sinh, cosh };
enum class BinaryOp { add, sub, mul, div };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  NodeKind kind{NodeKind::constant};
  double value{0.0};        // constant
  int variable{0};          // 0 -> u1, 1 -> u2
  UnaryFn fn{UnaryFn::neg};
  BinaryOp op{BinaryOp::add};
  int exponent{1};          // power
  NodePtr lhs;              // operand of unary / power, left of binary
  NodePtr rhs;
  std::size_t offset{0};    // byte offset of the node in the source text
  int height{1};
};

/// Three immutable expression trees, one per Cartesian coordinate.
struct ExprAst {
  std::array<NodePtr, 3> components;
};

inline std::string_view function_name(UnaryFn fn) {
  switch (fn) {
    case UnaryFn::neg: return "-";
    case UnaryFn::sin: return "sin";
    case UnaryFn::cos: return "cos";
    case UnaryFn::tan: return "tan";
    case UnaryFn::exp: return "exp";
    case UnaryFn::ln: return "ln";
    case UnaryFn::sqrt: return "sqrt";
    case UnaryFn::sinh: return "sinh";
    case UnaryFn::cosh: return "cosh";
  }
  return "?";
}

namespace detail {

inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  ExprAst parse_surface() {
    skip_ws();
    bool braced = false;
    if (peek() == '{') {
      braced = true;
      ++pos_;
    }
    std::vector<NodePtr> parts;
    parts.push_back(parse_expr());
    skip_ws();
    while (peek() == ',') {
      ++pos_;
      parts.push_back(parse_expr());
      skip_ws();
    }
    if (braced) {
      if (peek() != '}') fail("expected '}'", pos_);
      ++pos_;
      skip_ws();
    }
    if (pos_ < text_.size()) fail(std::string("unexpected '") + text_[pos_] + "'", pos_);
    if (parts.size() != 3)
      throw Error(ErrorKind::wrong_component_count,
                  "expected 3 comma-separated components, got " + std::to_string(parts.size()));
    return ExprAst{{parts[0], parts[1], parts[2]}};
  }

  NodePtr parse_single() {
    NodePtr e = parse_expr();
    skip_ws();
    if (pos_ < text_.size()) fail(std::string("unexpected '") + text_[pos_] + "'", pos_);
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what, std::size_t at) const {
    throw Error(ErrorKind::syntax_error, what + " at offset " + std::to_string(at), at);
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void skip_ws() {
    while (pos_ < text_.size() &&
           (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\r' || text_[pos_] == '\n'))
      ++pos_;
  }

  static bool is_ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  }
  static bool is_digit(char c) { return c >= '0' && c <= '9'; }
  static bool is_ident_char(char c) { return is_ident_start(c) || is_digit(c); }

  bool starts_operand() {
    skip_ws();
    const char c = peek();
    return is_digit(c) || c == '.' || is_ident_start(c) || c == '(' || c == '-' || c == '+';
  }

  // A binary operator at `op_at` must be followed by an operand.
  void require_operand(std::size_t op_at) {
    if (!starts_operand())
      fail(std::string("operator '") + text_[op_at] + "' is missing its right operand", op_at);
  }

  static std::shared_ptr<Node> make_binary(BinaryOp op, NodePtr l, NodePtr r, std::size_t at) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::binary;
    n->op = op;
    n->lhs = std::move(l);
    n->rhs = std::move(r);
    n->offset = at;
    return n;
  }

  // Caps tree height so evaluation, printing, and destruction stay shallow.
  NodePtr checked(std::shared_ptr<Node> n) const {
    n->height = 1 + std::max(n->lhs ? n->lhs->height : 0, n->rhs ? n->rhs->height : 0);
    if (n->height > kMaxHeight) fail("expression too long", n->offset);
    return n;
  }
  static constexpr int kMaxHeight = 400;

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      skip_ws();
      const char c = peek();
      if (c != '+' && c != '-') return lhs;
      const std::size_t at = pos_++;
      require_operand(at);
      lhs = checked(make_binary(c == '+' ? BinaryOp::add : BinaryOp::sub, lhs, parse_term(), at));
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    for (;;) {
      skip_ws();
      const char c = peek();
      if (c != '*' && c != '/') return lhs;
      const std::size_t at = pos_++;
      require_operand(at);
      lhs = checked(make_binary(c == '*' ? BinaryOp::mul : BinaryOp::div, lhs, parse_unary(), at));
    }
  }

  NodePtr parse_unary() {
    skip_ws();
    const DepthGuard guard(*this);
    const char c = peek();
    if (c == '-' || c == '+') {
      const std::size_t at = pos_++;
      require_operand(at);
      NodePtr operand = parse_unary();
      if (c == '+') return operand;
      auto n = std::make_shared<Node>();
      n->kind = NodeKind::unary;
      n->fn = UnaryFn::neg;
      n->lhs = std::move(operand);
      n->offset = at;
      return checked(std::move(n));
    }
    return parse_power();
  }

  int parse_integer_exponent() {
    skip_ws();
    bool paren = false;
    if (peek() == '(') {
      paren = true;
      ++pos_;
      skip_ws();
    }
    bool negative = false;
    if (peek() == '-' || peek() == '+') {
      negative = peek() == '-';
      ++pos_;
      skip_ws();
    }
    const std::size_t start = pos_;
    while (is_digit(peek())) ++pos_;
    if (start == pos_) fail("exponent must be an integer literal", start);
    if (peek() == '.' || peek() == 'e' || peek() == 'E')
      fail("exponent must be an integer literal", start);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc{} || value > 64) fail("exponent out of range", start);
    if (paren) {
      skip_ws();
      if (peek() != ')') fail("expected ')'", pos_);
      ++pos_;
    }
    return negative ? -value : value;
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    for (;;) {
      skip_ws();
      if (peek() != '^') return base;
      const std::size_t at = pos_++;
      auto n = std::make_shared<Node>();
      n->kind = NodeKind::power;
      n->exponent = parse_integer_exponent();
      n->lhs = std::move(base);
      n->offset = at;
      base = checked(std::move(n));
    }
  }

  NodePtr parse_primary() {
    skip_ws();
    const std::size_t at = pos_;
    const char c = peek();
    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_expr();
      skip_ws();
      if (peek() != ')') fail("expected ')'", pos_);
      ++pos_;
      return inner;
    }
    if (is_digit(c) || c == '.') return parse_number();
    if (is_ident_start(c)) {
      while (is_ident_char(peek())) ++pos_;
      const std::string_view name = text_.substr(at, pos_ - at);
      if (name == "u1" || name == "x1" || name == "u2" || name == "x2") {
        auto n = std::make_shared<Node>();
        n->kind = NodeKind::variable;
        n->variable = name.back() == '1' ? 0 : 1;
        n->offset = at;
        return n;
      }
      if (name == "pi") {
        auto n = std::make_shared<Node>();
        n->kind = NodeKind::constant;
        n->value = std::numbers::pi;
        n->offset = at;
        return n;
      }
      static constexpr std::array<std::pair<std::string_view, UnaryFn>, 8> functions{{
          {"sin", UnaryFn::sin}, {"cos", UnaryFn::cos}, {"tan", UnaryFn::tan},
          {"exp", UnaryFn::exp}, {"ln", UnaryFn::ln}, {"sqrt", UnaryFn::sqrt},
          {"sinh", UnaryFn::sinh}, {"cosh", UnaryFn::cosh},
      }};
      for (const auto& [fname, fn] : functions) {
        if (name != fname) continue;
        skip_ws();
        if (peek() != '(') fail("expected '(' after function '" + std::string(name) + "'", pos_);
        ++pos_;
        NodePtr arg = parse_expr();
        skip_ws();
        if (peek() != ')') fail("expected ')'", pos_);
        ++pos_;
        auto n = std::make_shared<Node>();
        n->kind = NodeKind::unary;
        n->fn = fn;
        n->lhs = std::move(arg);
        n->offset = at;
        return checked(std::move(n));
      }
      throw Error(ErrorKind::unknown_identifier,
                  "unknown identifier '" + std::string(name) + "' at offset " + std::to_string(at), at);
    }
    if (c == '\0') fail("unexpected end of input", at);
    fail(std::string("unexpected '") + c + "'", at);
  }

  NodePtr parse_number() {
    const std::size_t at = pos_;
    while (is_digit(peek())) ++pos_;
    if (peek() == '.') {
      ++pos_;
      while (is_digit(peek())) ++pos_;
    }
    if (peek() == 'e' || peek() == 'E') {
      std::size_t save = pos_++;
      if (peek() == '+' || peek() == '-') ++pos_;
      if (!is_digit(peek())) {
        pos_ = save;
      } else {
        while (is_digit(peek())) ++pos_;
      }
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text_.data() + at, text_.data() + pos_, value);
    if (ec != std::errc{} || ptr != text_.data() + pos_) fail("malformed number", at);
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::constant;
    n->value = value;
    n->offset = at;
    return n;
  }

  // Bounds recursion so hostile input fails as a syntax error instead of
  // exhausting the stack.
  struct DepthGuard {
    static constexpr int kMaxDepth = 200;
    explicit DepthGuard(Parser& p) : parser(p) {
      if (++parser.depth_ > kMaxDepth) parser.fail("expression nested too deeply", parser.pos_);
    }
    ~DepthGuard() { --parser.depth_; }
    DepthGuard(const DepthGuard&) = delete;
    DepthGuard& operator=(const DepthGuard&) = delete;
    Parser& parser;
  };

  std::string_view text_;
  std::size_t pos_{0};
  int depth_{0};
};

inline double scalar_value(double x) { return x; }
template <int N>
double scalar_value(const JetD<N>& x) {
  return x.value();
}

}  // namespace detail

/// Parse a vector equation into three expression trees.
inline ExprAst parse(std::string_view text) { return detail::Parser(text).parse_surface(); }

/// Parse a single scalar expression.
inline NodePtr parse_expression(std::string_view text) { return detail::Parser(text).parse_single(); }

/// Fully parenthesized rendering; parse(print(ast)) is an equivalent AST.
inline std::string print(const NodePtr& node) {
  switch (node->kind) {
    case NodeKind::constant: {
      std::string s = detail::format_number(node->value);
      return node->value < 0 ? "(" + s + ")" : s;
    }
    case NodeKind::variable:
      return node->variable == 0 ? "u1" : "u2";
    case NodeKind::unary:
      if (node->fn == UnaryFn::neg) return "(-" + print(node->lhs) + ")";
      return std::string(function_name(node->fn)) + "(" + print(node->lhs) + ")";
    case NodeKind::binary: {
      static constexpr std::array<const char*, 4> ops{" + ", " - ", " * ", " / "};
      return "(" + print(node->lhs) + ops[static_cast<int>(node->op)] + print(node->rhs) + ")";
    }
    case NodeKind::power:
      return "(" + print(node->lhs) + "^" +
             (node->exponent < 0 ? "(" + std::to_string(node->exponent) + ")"
                                 : std::to_string(node->exponent)) +
             ")";
  }
  return {};
}

inline std::string print(const ExprAst& ast) {
  return print(ast.components[0]) + ", " + print(ast.components[1]) + ", " +
         print(ast.components[2]);
}

/// Evaluate one tree with scalar type S (double or a Jet). Domain
/// violations raise ErrorKind::domain_error naming the subexpression.
template <class S>
S evaluate(const NodePtr& node, const S& u1, const S& u2) {
  using detail::scalar_value;
  auto domain_fail = [&](const char* what) {
    throw Error(ErrorKind::domain_error, std::string(what) + " in '" + print(node) + "'",
                node->offset);
  };
  switch (node->kind) {
    case NodeKind::constant:
      return S(node->value);
    case NodeKind::variable:
      return node->variable == 0 ? u1 : u2;
    case NodeKind::unary: {
      const S x = evaluate(node->lhs, u1, u2);
      const double x0 = scalar_value(x);
      using std::cos, std::cosh, std::exp, std::log, std::sin, std::sinh, std::sqrt, std::tan;
      switch (node->fn) {
        case UnaryFn::neg: return -x;
        case UnaryFn::sin: return sin(x);
        case UnaryFn::cos: return cos(x);
        case UnaryFn::tan:
          if (std::cos(x0) == 0.0) domain_fail("tan pole");
          return tan(x);
        case UnaryFn::exp: return exp(x);
        case UnaryFn::ln:
          if (!(x0 > 0.0)) domain_fail("ln of non-positive argument");
          return log(x);
        case UnaryFn::sqrt:
          if (!(x0 > 0.0)) domain_fail("sqrt of non-positive argument");
          return sqrt(x);
        case UnaryFn::sinh: return sinh(x);
        case UnaryFn::cosh: return cosh(x);
      }
      break;
    }
    case NodeKind::binary: {
      const S l = evaluate(node->lhs, u1, u2);
      const S r = evaluate(node->rhs, u1, u2);
      switch (node->op) {
        case BinaryOp::add: return l + r;
        case BinaryOp::sub: return l - r;
        case BinaryOp::mul: return l * r;
        case BinaryOp::div:
          if (scalar_value(r) == 0.0) domain_fail("division by zero");
          return l / r;
      }
      break;
    }
    case NodeKind::power: {
      const S base = evaluate(node->lhs, u1, u2);
      if (node->exponent < 0 && scalar_value(base) == 0.0) domain_fail("division by zero");
      if constexpr (std::is_same_v<S, double>) {
        return std::pow(base, node->exponent);
      } else {
        return pow(base, node->exponent);
      }
    }
  }
  throw Error(ErrorKind::invalid_argument, "malformed expression node");
}

template <class S>
Vec3T<S> evaluate(const ExprAst& ast, const S& u1, const S& u2) {
  return {evaluate(ast.components[0], u1, u2), evaluate(ast.components[1], u1, u2),
          evaluate(ast.components[2], u1, u2)};
}

/// Position and all partials up to `order` via degree-4 jet arithmetic.
inline SurfaceJet diff_eval(const ExprAst& ast, Point point, int order) {
  if (order < 0 || order > SurfaceJet::max_order)
    throw Error(ErrorKind::invalid_argument, "order must be in 0..4");
  if (!std::isfinite(point.u1) || !std::isfinite(point.u2))
    throw Error(ErrorKind::invalid_argument, "point must be finite");
  using J = JetD<SurfaceJet::max_order>;
  const auto r = evaluate(ast, J::variable(0, point.u1), J::variable(1, point.u2));
  return make_surface_jet(point, order, r);
}

}  // namespace deltab::expr
