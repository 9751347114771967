#pragma once

// Scalar expression trees: parsing, evaluation and symbolic differentiation.
//
// Expressions are immutable and share structure through shared_ptr, so they
// are cheap to copy and safe to evaluate concurrently.

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <variant>

#include "weyl/error.hpp"

namespace weyl {

enum class Var : std::uint8_t { x, y, z, t, theta, phi };
inline constexpr std::size_t kVarCount = 6;

inline constexpr std::string_view var_name(Var v) {
  constexpr std::array<std::string_view, kVarCount> names{"x", "y", "z", "t", "theta", "phi"};
  return names[static_cast<std::size_t>(v)];
}

enum class UnaryOp : std::uint8_t { neg, sin, cos, tan, exp, log, sqrt, abs };
enum class BinaryOp : std::uint8_t { add, sub, mul, div, pow };

class Expr;

namespace detail {
struct Node;
}

/// Values for the free variables of an expression.
class Bindings {
 public:
  Bindings() = default;

  Bindings& set(Var v, double value) {
    values_[static_cast<std::size_t>(v)] = value;
    return *this;
  }
  Bindings with(Var v, double value) const {
    Bindings copy = *this;
    copy.set(v, value);
    return copy;
  }
  std::optional<double> get(Var v) const { return values_[static_cast<std::size_t>(v)]; }

 private:
  std::array<std::optional<double>, kVarCount> values_{};
};

class Expr {
 public:
  struct Constant {
    double value;
  };
  struct Variable {
    Var var;
  };
  struct Unary {
    UnaryOp op;
    std::shared_ptr<const detail::Node> arg;
  };
  struct Binary {
    BinaryOp op;
    std::shared_ptr<const detail::Node> lhs;
    std::shared_ptr<const detail::Node> rhs;
  };
  using Payload = std::variant<Constant, Variable, Unary, Binary>;

  /// The zero constant.
  Expr();

  static Expr constant(double value);
  static Expr variable(Var v);
  static Expr unary(UnaryOp op, const Expr& arg);
  static Expr binary(BinaryOp op, const Expr& lhs, const Expr& rhs);

  const Payload& payload() const;

  bool is_constant() const { return std::holds_alternative<Constant>(payload()); }
  std::optional<double> constant_value() const {
    if (auto* c = std::get_if<Constant>(&payload())) return c->value;
    return std::nullopt;
  }

  /// True when `v` occurs anywhere in the tree.
  bool depends_on(Var v) const;
  /// True when no variable occurs in the tree.
  bool is_closed() const;

  double eval(const Bindings& bindings) const;

  /// Fully parenthesised text that parses back to an equivalent tree.
  std::string str() const;

 private:
  explicit Expr(std::shared_ptr<const detail::Node> node) : node_(std::move(node)) {}
  friend struct detail::Node;

  std::shared_ptr<const detail::Node> node_;
};

namespace detail {

struct Node {
  Expr::Payload payload;
  static Expr wrap(std::shared_ptr<const Node> n) { return Expr(std::move(n)); }
  static const std::shared_ptr<const Node>& unwrap(const Expr& e) { return e.node_; }
};

inline std::string format_number(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  (void)ec;
  return std::string(buf.data(), end);
}

inline std::string_view unary_name(UnaryOp op) {
  switch (op) {
    case UnaryOp::neg: return "-";
    case UnaryOp::sin: return "sin";
    case UnaryOp::cos: return "cos";
    case UnaryOp::tan: return "tan";
    case UnaryOp::exp: return "exp";
    case UnaryOp::log: return "log";
    case UnaryOp::sqrt: return "sqrt";
    case UnaryOp::abs: return "abs";
  }
  return "?";
}

inline char binary_symbol(BinaryOp op) {
  switch (op) {
    case BinaryOp::add: return '+';
    case BinaryOp::sub: return '-';
    case BinaryOp::mul: return '*';
    case BinaryOp::div: return '/';
    case BinaryOp::pow: return '^';
  }
  return '?';
}

}  // namespace detail

inline Expr::Expr() : Expr(constant(0.0)) {}

inline Expr Expr::constant(double value) {
  return detail::Node::wrap(std::make_shared<const detail::Node>(detail::Node{Constant{value}}));
}

inline Expr Expr::variable(Var v) {
  return detail::Node::wrap(std::make_shared<const detail::Node>(detail::Node{Variable{v}}));
}

inline Expr Expr::unary(UnaryOp op, const Expr& arg) {
  return detail::Node::wrap(
      std::make_shared<const detail::Node>(detail::Node{Unary{op, detail::Node::unwrap(arg)}}));
}

inline Expr Expr::binary(BinaryOp op, const Expr& lhs, const Expr& rhs) {
  return detail::Node::wrap(std::make_shared<const detail::Node>(
      detail::Node{Binary{op, detail::Node::unwrap(lhs), detail::Node::unwrap(rhs)}}));
}

inline const Expr::Payload& Expr::payload() const { return node_->payload; }

inline bool Expr::depends_on(Var v) const {
  return std::visit(
      [v](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Constant>) {
          return false;
        } else if constexpr (std::is_same_v<T, Variable>) {
          return n.var == v;
        } else if constexpr (std::is_same_v<T, Unary>) {
          return detail::Node::wrap(n.arg).depends_on(v);
        } else {
          return detail::Node::wrap(n.lhs).depends_on(v) || detail::Node::wrap(n.rhs).depends_on(v);
        }
      },
      payload());
}

inline bool Expr::is_closed() const {
  for (std::size_t i = 0; i < kVarCount; ++i) {
    if (depends_on(static_cast<Var>(i))) return false;
  }
  return true;
}

inline std::string Expr::str() const {
  return std::visit(
      [](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Constant>) {
          auto s = detail::format_number(n.value);
          return std::signbit(n.value) ? "(" + s + ")" : s;
        } else if constexpr (std::is_same_v<T, Variable>) {
          return std::string(var_name(n.var));
        } else if constexpr (std::is_same_v<T, Unary>) {
          auto arg = detail::Node::wrap(n.arg).str();
          if (n.op == UnaryOp::neg) return "(-" + arg + ")";
          return std::string(detail::unary_name(n.op)) + "(" + arg + ")";
        } else {
          return "(" + detail::Node::wrap(n.lhs).str() + " " + detail::binary_symbol(n.op) + " " +
                 detail::Node::wrap(n.rhs).str() + ")";
        }
      },
      payload());
}

namespace detail {

inline double eval_node(const std::shared_ptr<const Node>& node, const Bindings& bindings) {
  auto fail = [&](const std::string& what) -> EvalError { return EvalError(what, Node::wrap(node).str()); };
  return std::visit(
      [&](const auto& n) -> double {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Expr::Constant>) {
          return n.value;
        } else if constexpr (std::is_same_v<T, Expr::Variable>) {
          auto v = bindings.get(n.var);
          if (!v) throw fail("unbound variable '" + std::string(var_name(n.var)) + "'");
          return *v;
        } else if constexpr (std::is_same_v<T, Expr::Unary>) {
          const double a = eval_node(n.arg, bindings);
          double r = 0.0;
          switch (n.op) {
            case UnaryOp::neg: r = -a; break;
            case UnaryOp::sin: r = std::sin(a); break;
            case UnaryOp::cos: r = std::cos(a); break;
            case UnaryOp::tan:
              if (std::cos(a) == 0.0) throw fail("tan pole");
              r = std::tan(a);
              break;
            case UnaryOp::exp: r = std::exp(a); break;
            case UnaryOp::log:
              if (!(a > 0.0)) throw fail("log of non-positive value");
              r = std::log(a);
              break;
            case UnaryOp::sqrt:
              if (a < 0.0) throw fail("sqrt of negative value");
              r = std::sqrt(a);
              break;
            case UnaryOp::abs: r = std::abs(a); break;
          }
          if (!std::isfinite(r) && std::isfinite(a)) throw fail("non-finite result");
          return r;
        } else {
          const double a = eval_node(n.lhs, bindings);
          const double b = eval_node(n.rhs, bindings);
          double r = 0.0;
          switch (n.op) {
            case BinaryOp::add: r = a + b; break;
            case BinaryOp::sub: r = a - b; break;
            case BinaryOp::mul: r = a * b; break;
            case BinaryOp::div:
              if (b == 0.0) throw fail("division by zero");
              r = a / b;
              break;
            case BinaryOp::pow:
              if (a < 0.0 && b != std::floor(b)) throw fail("negative base with non-integer exponent");
              if (a == 0.0 && b < 0.0) throw fail("division by zero");
              r = std::pow(a, b);
              break;
          }
          if (!std::isfinite(r) && std::isfinite(a) && std::isfinite(b)) throw fail("non-finite result");
          return r;
        }
      },
      node->payload);
}

}  // namespace detail

/// Deterministic IEEE double evaluation. Throws EvalError naming the offending
/// sub-expression on unbound variables and domain errors.
inline double Expr::eval(const Bindings& bindings) const { return detail::eval_node(node_, bindings); }

inline double eval_expr(const Expr& e, const Bindings& bindings) { return e.eval(bindings); }

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

/// Named real constants available to the parser in addition to `pi`.
using Parameters = std::map<std::string, double, std::less<>>;

namespace detail {

class Parser {
 public:
  Parser(std::string_view text, const Parameters& params) : text_(text), params_(params) {}

  Expr parse() {
    skip_ws();
    if (pos_ == text_.size()) throw ParseError("empty expression", 0);
    Expr e = parse_sum();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
                                   text_[pos_] == '\r')) {
      ++pos_;
    }
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size()) throw ParseError(std::string("expected '") + c + "', got end of input", pos_);
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
  }

  Expr parse_sum() {
    Expr lhs = parse_product();
    for (;;) {
      if (accept('+')) {
        lhs = Expr::binary(BinaryOp::add, lhs, parse_product());
      } else if (accept('-')) {
        lhs = Expr::binary(BinaryOp::sub, lhs, parse_product());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_product() {
    Expr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = Expr::binary(BinaryOp::mul, lhs, parse_unary());
      } else if (accept('/')) {
        lhs = Expr::binary(BinaryOp::div, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  // Unary minus binds looser than '^': -2^2 == -(2^2).
  Expr parse_unary() {
    if (accept('-')) return Expr::unary(UnaryOp::neg, parse_unary());
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  // '^' is right associative and accepts a signed exponent: 2^-1, 2^3^2 == 2^(3^2).
  Expr parse_power() {
    Expr base = parse_primary();
    if (accept('^')) return Expr::binary(BinaryOp::pow, base, parse_unary());
    return base;
  }

  Expr parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = parse_sum();
      expect(')');
      return e;
    }
    if ((c >= '0' && c <= '9') || c == '.') return parse_number();
    if (is_ident_start(c)) return parse_identifier();
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && ((text_[pos_] >= '0' && text_[pos_] <= '9') || text_[pos_] == '.')) ++pos_;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
      if (p < text_.size() && text_[p] >= '0' && text_[p] <= '9') {
        pos_ = p;
        while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') ++pos_;
      }
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc() || ptr != text_.data() + pos_) throw ParseError("malformed number", start);
    return Expr::constant(value);
  }

  static bool is_ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
  static bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }

  Expr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);

    static constexpr std::array<std::pair<std::string_view, UnaryOp>, 7> functions{{
        {"sin", UnaryOp::sin},
        {"cos", UnaryOp::cos},
        {"tan", UnaryOp::tan},
        {"exp", UnaryOp::exp},
        {"log", UnaryOp::log},
        {"sqrt", UnaryOp::sqrt},
        {"abs", UnaryOp::abs},
    }};
    for (const auto& [fname, op] : functions) {
      if (name == fname) {
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] != '(') {
          throw ParseError("expected '(' after function '" + std::string(name) + "'", pos_);
        }
        ++pos_;
        Expr arg = parse_sum();
        expect(')');
        return Expr::unary(op, arg);
      }
    }
    for (std::size_t i = 0; i < kVarCount; ++i) {
      if (name == var_name(static_cast<Var>(i))) return Expr::variable(static_cast<Var>(i));
    }
    if (auto it = params_.find(name); it != params_.end()) return Expr::constant(it->second);
    if (name == "pi") return Expr::constant(std::numbers::pi);
    throw ParseError("unknown identifier '" + std::string(name) + "'", start);
  }

  std::string_view text_;
  const Parameters& params_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses infix arithmetic over x, y, z, t, theta, phi, `pi` and the given parameters.
/// Throws ParseError with the byte offset of the problem.
inline Expr parse_expr(std::string_view text, const Parameters& params = {}) {
  return detail::Parser(text, params).parse();
}

// ---------------------------------------------------------------------------
// Differentiation
// ---------------------------------------------------------------------------

namespace detail {

// Builders used by diff_expr. They drop exact identities (0+x, 1*x, x^1, ...)
// so derivatives of simple laws stay small; there is no further rewriting.
inline bool is_value(const Expr& e, double v) {
  auto c = e.constant_value();
  return c && *c == v;
}

inline Expr add(const Expr& a, const Expr& b) {
  if (is_value(a, 0.0)) return b;
  if (is_value(b, 0.0)) return a;
  if (a.is_constant() && b.is_constant()) return Expr::constant(*a.constant_value() + *b.constant_value());
  return Expr::binary(BinaryOp::add, a, b);
}

inline Expr neg(const Expr& a) {
  if (auto c = a.constant_value()) return Expr::constant(-*c);
  return Expr::unary(UnaryOp::neg, a);
}

inline Expr sub(const Expr& a, const Expr& b) {
  if (is_value(b, 0.0)) return a;
  if (is_value(a, 0.0)) return neg(b);
  if (a.is_constant() && b.is_constant()) return Expr::constant(*a.constant_value() - *b.constant_value());
  return Expr::binary(BinaryOp::sub, a, b);
}

inline Expr mul(const Expr& a, const Expr& b) {
  if (is_value(a, 0.0) || is_value(b, 0.0)) return Expr::constant(0.0);
  if (is_value(a, 1.0)) return b;
  if (is_value(b, 1.0)) return a;
  if (a.is_constant() && b.is_constant()) return Expr::constant(*a.constant_value() * *b.constant_value());
  return Expr::binary(BinaryOp::mul, a, b);
}

inline Expr div(const Expr& a, const Expr& b) {
  if (is_value(a, 0.0)) return Expr::constant(0.0);
  if (is_value(b, 1.0)) return a;
  return Expr::binary(BinaryOp::div, a, b);
}

inline Expr pow(const Expr& a, const Expr& b) {
  if (is_value(b, 1.0)) return a;
  if (is_value(b, 0.0)) return Expr::constant(1.0);
  return Expr::binary(BinaryOp::pow, a, b);
}

inline Expr fn(UnaryOp op, const Expr& a) { return Expr::unary(op, a); }

}  // namespace detail

/// Symbolic partial derivative with respect to `var`. The result uses the same
/// node set as the input. Points where the derivative is undefined (abs at 0,
/// log or sqrt at 0) surface as EvalError when the result is evaluated.
inline Expr diff_expr(const Expr& e, Var var) {
  using namespace detail;
  return std::visit(
      [&](const auto& n) -> Expr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Expr::Constant>) {
          return Expr::constant(0.0);
        } else if constexpr (std::is_same_v<T, Expr::Variable>) {
          return Expr::constant(n.var == var ? 1.0 : 0.0);
        } else if constexpr (std::is_same_v<T, Expr::Unary>) {
          const Expr u = Node::wrap(n.arg);
          const Expr du = diff_expr(u, var);
          if (is_value(du, 0.0)) return Expr::constant(0.0);
          switch (n.op) {
            case UnaryOp::neg: return neg(du);
            case UnaryOp::sin: return mul(fn(UnaryOp::cos, u), du);
            case UnaryOp::cos: return neg(mul(fn(UnaryOp::sin, u), du));
            case UnaryOp::tan: return div(du, pow(fn(UnaryOp::cos, u), Expr::constant(2.0)));
            case UnaryOp::exp: return mul(e, du);
            case UnaryOp::log: return div(du, u);
            case UnaryOp::sqrt: return div(du, mul(Expr::constant(2.0), e));
            case UnaryOp::abs: return mul(div(u, e), du);
          }
          return Expr::constant(0.0);
        } else {
          const Expr u = Node::wrap(n.lhs);
          const Expr v = Node::wrap(n.rhs);
          const Expr du = diff_expr(u, var);
          const Expr dv = diff_expr(v, var);
          switch (n.op) {
            case BinaryOp::add: return add(du, dv);
            case BinaryOp::sub: return sub(du, dv);
            case BinaryOp::mul: return add(mul(du, v), mul(u, dv));
            case BinaryOp::div: return div(sub(mul(du, v), mul(u, dv)), pow(v, Expr::constant(2.0)));
            case BinaryOp::pow:
              if (is_value(dv, 0.0)) {
                // d(u^c) = c u^(c-1) u'
                return mul(mul(v, pow(u, sub(v, Expr::constant(1.0)))), du);
              }
              if (is_value(du, 0.0)) {
                // d(c^v) = c^v log(c) v'
                return mul(mul(e, fn(UnaryOp::log, u)), dv);
              }
              return mul(e, add(mul(dv, fn(UnaryOp::log, u)), div(mul(v, du), u)));
          }
          return Expr::constant(0.0);
        }
      },
      e.payload());
}

}  // namespace weyl
