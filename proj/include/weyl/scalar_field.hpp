#pragma once

#include <string>

#include "weyl/angle_law.hpp"
#include "weyl/expr.hpp"

namespace weyl {

/// A point of spacetime in natural units.
struct Event {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double t = 0.0;

  Event shifted(int axis, double delta) const {
    Event e = *this;
    switch (axis) {
      case 0: e.t += delta; break;
      case 1: e.x += delta; break;
      case 2: e.y += delta; break;
      default: e.z += delta; break;
    }
    return e;
  }
};

/// (d/dt, d/dx, d/dy, d/dz) of a scalar field at an event.
struct FourGradient {
  double dt = 0.0;
  double dx = 0.0;
  double dy = 0.0;
  double dz = 0.0;
};

/// Real scalar function of (x, y, z, t), optionally also of theta and phi.
///
/// Angle dependence enters through the law, so the time derivative picks up
/// the chain-rule terms d/dtheta * theta' + d/dphi * phi'.
class ScalarField {
 public:
  ScalarField() : ScalarField(Expr::constant(0.0)) {}

  explicit ScalarField(Expr e)
      : f_(std::move(e)),
        dx_(diff_expr(f_, Var::x)),
        dy_(diff_expr(f_, Var::y)),
        dz_(diff_expr(f_, Var::z)),
        dt_(diff_expr(f_, Var::t)),
        dtheta_(diff_expr(f_, Var::theta)),
        dphi_(diff_expr(f_, Var::phi)) {}

  static ScalarField zero() { return ScalarField(); }
  static ScalarField constant(double c) { return ScalarField(Expr::constant(c)); }
  static ScalarField parse(std::string_view text, const Parameters& params = {}) {
    return ScalarField(parse_expr(text, params));
  }

  /// Free-particle phase E0 [x sin(theta)cos(phi) + y sin(theta)sin(phi) + z cos(theta) - t].
  static ScalarField plane_wave(double energy) {
    Parameters p{{"E0", energy}};
    return parse("E0*(x*sin(theta)*cos(phi) + y*sin(theta)*sin(phi) + z*cos(theta) - t)", p);
  }

  const Expr& expr() const { return f_; }

  bool depends_on_space() const {
    return f_.depends_on(Var::x) || f_.depends_on(Var::y) || f_.depends_on(Var::z);
  }

  double value(const Event& ev, const AngleSample& a) const { return f_.eval(bind(ev, a)); }

  FourGradient gradient(const Event& ev, const AngleSample& a) const {
    const Bindings b = bind(ev, a);
    FourGradient g;
    g.dx = dx_.eval(b);
    g.dy = dy_.eval(b);
    g.dz = dz_.eval(b);
    g.dt = dt_.eval(b) + dtheta_.eval(b) * a.theta_dot + dphi_.eval(b) * a.phi_dot;
    return g;
  }

  double value(const Event& ev, const AngleLaw& law) const { return value(ev, law.sample(ev.t)); }
  FourGradient gradient(const Event& ev, const AngleLaw& law) const { return gradient(ev, law.sample(ev.t)); }

 private:
  static Bindings bind(const Event& ev, const AngleSample& a) {
    Bindings b;
    b.set(Var::x, ev.x).set(Var::y, ev.y).set(Var::z, ev.z).set(Var::t, ev.t);
    b.set(Var::theta, a.theta).set(Var::phi, a.phi);
    return b;
  }

  Expr f_;
  Expr dx_, dy_, dz_, dt_, dtheta_, dphi_;
};

/// Phase h(r, t) of the spinor.
using PhaseField = ScalarField;
/// Gauge scalar s(r, t) of the degenerate potential family.
using GaugeScalar = ScalarField;

}  // namespace weyl
