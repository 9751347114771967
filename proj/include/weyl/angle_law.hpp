#pragma once

#include <cmath>
#include <string>
#include <variant>

#include "weyl/expr.hpp"

namespace weyl {

/// theta(t) = offset + rate * t.
struct LinearLaw {
  double offset = 0.0;
  double rate = 0.0;
};

/// Arbitrary law in t, with both derivatives prepared symbolically.
class CustomLaw {
 public:
  explicit CustomLaw(Expr e) : value_(std::move(e)) {
    for (Var v : {Var::x, Var::y, Var::z, Var::theta, Var::phi}) {
      if (value_.depends_on(v)) {
        throw DomainError("time law may only depend on t, found '" + std::string(var_name(v)) + "'");
      }
    }
    first_ = diff_expr(value_, Var::t);
    second_ = diff_expr(first_, Var::t);
  }

  const Expr& expr() const { return value_; }
  double value(double t) const { return value_.eval(at(t)); }
  double rate(double t) const { return first_.eval(at(t)); }
  double accel(double t) const { return second_.eval(at(t)); }

 private:
  static Bindings at(double t) { return Bindings{}.set(Var::t, t); }

  Expr value_;
  Expr first_;
  Expr second_;
};

/// A single angle as a function of time: Linear or Custom.
class TimeLaw {
 public:
  TimeLaw() = default;
  TimeLaw(LinearLaw l) : law_(l) {}  // NOLINT(google-explicit-constructor)
  TimeLaw(CustomLaw c) : law_(std::move(c)) {}  // NOLINT(google-explicit-constructor)

  static TimeLaw constant(double value) { return LinearLaw{value, 0.0}; }
  static TimeLaw linear(double offset, double rate) { return LinearLaw{offset, rate}; }
  static TimeLaw custom(const Expr& e) { return CustomLaw(e); }

  bool is_linear() const { return std::holds_alternative<LinearLaw>(law_); }
  const LinearLaw* linear_law() const { return std::get_if<LinearLaw>(&law_); }

  double value(double t) const {
    if (auto* l = linear_law()) return l->offset + l->rate * t;
    return std::get<CustomLaw>(law_).value(t);
  }
  double rate(double t) const {
    if (auto* l = linear_law()) return l->rate;
    return std::get<CustomLaw>(law_).rate(t);
  }
  double accel(double t) const {
    if (is_linear()) return 0.0;
    return std::get<CustomLaw>(law_).accel(t);
  }

  std::string describe() const {
    if (auto* l = linear_law()) {
      return detail::format_number(l->offset) + " + " + detail::format_number(l->rate) + "*t";
    }
    return std::get<CustomLaw>(law_).expr().str();
  }

 private:
  std::variant<LinearLaw, CustomLaw> law_{LinearLaw{}};
};

/// Angles and their first two time derivatives at one instant.
struct AngleSample {
  double theta = 0.0;
  double phi = 0.0;
  double theta_dot = 0.0;
  double phi_dot = 0.0;
  double theta_ddot = 0.0;
  double phi_ddot = 0.0;
};

/// The pair theta(t), phi(t) that labels a spinor of the solution family.
struct AngleLaw {
  TimeLaw theta;
  TimeLaw phi;

  static AngleLaw linear(double theta0, double omega1, double phi0, double omega2) {
    return {TimeLaw::linear(theta0, omega1), TimeLaw::linear(phi0, omega2)};
  }
  static AngleLaw fixed(double theta0, double phi0) { return linear(theta0, 0.0, phi0, 0.0); }

  AngleSample sample(double t) const {
    return {theta.value(t), phi.value(t), theta.rate(t), phi.rate(t), theta.accel(t), phi.accel(t)};
  }

  // Offsets and rates; meaningful for linear laws only.
  double theta0() const { return theta.linear_law() ? theta.linear_law()->offset : theta.value(0.0); }
  double phi0() const { return phi.linear_law() ? phi.linear_law()->offset : phi.value(0.0); }
  double omega1() const { return theta.linear_law() ? theta.linear_law()->rate : theta.rate(0.0); }
  double omega2() const { return phi.linear_law() ? phi.linear_law()->rate : phi.rate(0.0); }
};

}  // namespace weyl
