#pragma once

// Trajectories of a classical particle moving with the spinor's velocity,
// with the angles driven by an applied electric field through the inverse of
// the drive-field relation.

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "weyl/angle_law.hpp"
#include "weyl/expr.hpp"
#include "weyl/observables.hpp"
#include "weyl/potentials.hpp"
#include "weyl/types.hpp"

namespace weyl {

struct ParticleState {
  Vec3 position = Vec3::Zero();
  double theta = 0.0;
  double phi = 0.0;
  double theta_dot = 0.0;
  double phi_dot = 0.0;
  Helicity helicity = Helicity::Positive;
  double q = 1.0;

  static ParticleState from_law(const AngleLaw& law, Helicity hel, double q, double t0 = 0.0,
                                const Vec3& position = Vec3::Zero()) {
    const AngleSample a = law.sample(t0);
    return {position, a.theta, a.phi, a.theta_dot, a.phi_dot, hel, q};
  }

  AngleSample angles(double theta_ddot = 0.0, double phi_ddot = 0.0) const {
    return {theta, phi, theta_dot, phi_dot, theta_ddot, phi_ddot};
  }
};

struct AngularAcceleration {
  double theta_ddot = 0.0;
  double phi_ddot = 0.0;
  /// |theta' phi' - 2q (Ex cos(phi) + Ey sin(phi))|: how far the field is from
  /// the family of drive fields at this instant.
  double constraint_residual = 0.0;
};

/// Solves the drive-field relation for the angular accelerations:
///   theta'' = 2q (Ex sin(phi) - Ey cos(phi)),   phi'' = -2q Ez.
/// Negative helicity sees -E.
inline AngularAcceleration accel_from_field(const ParticleState& s, const Vec3& E) {
  if (s.q == 0.0 || !std::isfinite(s.q)) throw DomainError("charge q must be finite and non-zero");
  const Vec3 e = helicity_sign(s.helicity) * E;
  const double cp = std::cos(s.phi), sp = std::sin(s.phi);
  AngularAcceleration a;
  a.theta_ddot = 2.0 * s.q * (e.x() * sp - e.y() * cp);
  a.phi_ddot = -2.0 * s.q * e.z();
  a.constraint_residual = std::abs(s.theta_dot * s.phi_dot - 2.0 * s.q * (e.x() * cp + e.y() * sp));
  return a;
}

/// Applied field as a function of time: pieces of expressions in t, or the
/// closed-form drive field of a prescribed angle law.
class FieldProgram {
 public:
  struct Piece {
    double t_begin = 0.0;
    std::array<Expr, 3> E;
    std::array<Expr, 3> B;
  };

  static FieldProgram zero() { return constant(Vec3::Zero()); }

  static FieldProgram constant(const Vec3& E, const Vec3& B = Vec3::Zero()) {
    return piecewise({{0.0, E}}, B);
  }

  static FieldProgram piecewise(const std::vector<std::pair<double, Vec3>>& segments, const Vec3& B = Vec3::Zero()) {
    FieldProgram p;
    for (const auto& [t0, E] : segments) {
      if (!p.pieces_.empty() && !(t0 > p.pieces_.back().t_begin)) {
        throw DomainError("piecewise field segments must have increasing start times");
      }
      p.pieces_.push_back({t0, {Expr::constant(E.x()), Expr::constant(E.y()), Expr::constant(E.z())},
                           {Expr::constant(B.x()), Expr::constant(B.y()), Expr::constant(B.z())}});
    }
    if (p.pieces_.empty()) throw DomainError("piecewise field needs at least one segment");
    return p;
  }

  /// Components are expressions in t only.
  static FieldProgram expressions(const std::array<Expr, 3>& E, const std::array<Expr, 3>& B = {}) {
    for (const auto* set : {&E, &B}) {
      for (const Expr& c : *set) {
        for (Var v : {Var::x, Var::y, Var::z, Var::theta, Var::phi}) {
          if (c.depends_on(v)) throw DomainError("field components may only depend on t");
        }
      }
    }
    FieldProgram p;
    p.pieces_.push_back({0.0, E, B});
    return p;
  }

  /// The drive field that keeps the angles on `law`.
  static FieldProgram angle_law_drive(const AngleLaw& law, Helicity hel, const ChargeSpec& q) {
    FieldProgram p;
    p.drive_ = Drive{law, hel, q.value()};
    return p;
  }

  EMField at(double t) const {
    if (drive_) return drive_field_closed_form(drive_->law, drive_->hel, ChargeSpec(drive_->q), t);
    const Piece* piece = &pieces_.front();
    for (const Piece& p : pieces_) {
      if (p.t_begin <= t) piece = &p;
    }
    const Bindings b = Bindings{}.set(Var::t, t);
    EMField f;
    for (int i = 0; i < 3; ++i) {
      f.E[i] = piece->E[static_cast<std::size_t>(i)].eval(b);
      f.B[i] = piece->B[static_cast<std::size_t>(i)].eval(b);
    }
    return f;
  }

 private:
  struct Drive {
    AngleLaw law;
    Helicity hel;
    double q;
  };

  FieldProgram() = default;

  std::vector<Piece> pieces_;
  std::optional<Drive> drive_;
};

struct TrajectorySample {
  double t = 0.0;
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  double theta = 0.0;
  double phi = 0.0;
  double theta_dot = 0.0;
  double phi_dot = 0.0;
  double k = 0.0;
  double energy = 0.0;
  Vec3 momentum = Vec3::Zero();
  /// Drive field plus the gauge-family field of s.
  Vec3 field = Vec3::Zero();
  double constraint_residual = 0.0;
};

struct Trajectory {
  double dt = 0.0;
  std::vector<TrajectorySample> samples;
};

struct IntegrationOptions {
  double constraint_tolerance = 1e-6;
  /// Gauge scalar s(t); shifts energy and momentum and adds its field to the
  /// reported field, without touching the angles.
  GaugeScalar gauge = GaugeScalar::zero();
};

/// Thrown when the applied field leaves the solution family. Carries the
/// samples produced up to and including the offending time.
class ConstraintViolation : public Error {
 public:
  ConstraintViolation(double t, double residual, Trajectory partial)
      : Error("field incompatible with the spinor family at t = " + detail::format_number(t) +
              " (constraint residual " + detail::format_number(residual) + ")"),
        time_(t),
        residual_(residual),
        partial_(std::move(partial)) {}

  double time() const { return time_; }
  double residual() const { return residual_; }
  const Trajectory& partial() const { return partial_; }

 private:
  double time_;
  double residual_;
  Trajectory partial_;
};

/// Classic fourth-order Runge-Kutta on (position, theta, phi, theta', phi').
class TrajectoryIntegrator {
 public:
  TrajectoryIntegrator(FieldProgram program, IntegrationOptions options = {})
      : program_(std::move(program)), options_(std::move(options)) {
    if (options_.gauge.depends_on_space()) throw DomainError("trajectory gauge scalar must depend on time only");
  }

  const FieldProgram& program() const { return program_; }
  const IntegrationOptions& options() const { return options_; }

  Vec3 drive_field(double t) const {
    const EMField f = program_.at(t);
    if (f.B.squaredNorm() != 0.0) {
      throw DomainError("drive field programs must have B = 0 (t = " + detail::format_number(t) + ")");
    }
    return f.E;
  }

  /// State after one RK4 step of size h from time t.
  ParticleState advance(const ParticleState& s, double t, double h) const {
    const State y0 = pack(s);
    const State k1 = rhs(s, t, y0);
    const State k2 = rhs(s, t + 0.5 * h, axpy(y0, 0.5 * h, k1));
    const State k3 = rhs(s, t + 0.5 * h, axpy(y0, 0.5 * h, k2));
    const State k4 = rhs(s, t + h, axpy(y0, h, k3));
    State y = y0;
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return unpack(s, y);
  }

  TrajectorySample observe(const ParticleState& s, double t) const {
    const Vec3 E = drive_field(t);
    const AngularAcceleration acc = accel_from_field(s, E);
    const AngleSample a = s.angles(acc.theta_ddot, acc.phi_ddot);
    const Event at_particle{s.position.x(), s.position.y(), s.position.z(), t};
    const double sv = options_.gauge.value(at_particle, a);

    TrajectorySample out;
    out.t = t;
    out.position = s.position;
    out.velocity = velocity(a);
    out.theta = s.theta;
    out.phi = s.phi;
    out.theta_dot = s.theta_dot;
    out.phi_dot = s.phi_dot;
    out.k = localization_k(a).k;
    const KineticMomentum m = kinetic_momentum(a, sv, s.helicity);
    out.energy = m.energy();
    out.momentum = m.momentum();
    out.field = E;
    if (!options_.gauge.expr().is_constant() || sv != 0.0) {
      out.field += gauge_family_field(a, sv, options_.gauge.gradient(at_particle, a), ChargeSpec(s.q)).E;
    }
    out.constraint_residual = acc.constraint_residual;
    return out;
  }

  static ParticleState state_of(const TrajectorySample& sample, Helicity hel, double q) {
    return {sample.position, sample.theta, sample.phi, sample.theta_dot, sample.phi_dot, hel, q};
  }

 private:
  using State = std::array<double, 7>;

  static State pack(const ParticleState& s) {
    return {s.position.x(), s.position.y(), s.position.z(), s.theta, s.phi, s.theta_dot, s.phi_dot};
  }
  static ParticleState unpack(const ParticleState& like, const State& y) {
    ParticleState s = like;
    s.position = Vec3(y[0], y[1], y[2]);
    s.theta = y[3];
    s.phi = y[4];
    s.theta_dot = y[5];
    s.phi_dot = y[6];
    return s;
  }
  static State axpy(const State& y, double h, const State& k) {
    State out = y;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += h * k[i];
    return out;
  }

  State rhs(const ParticleState& like, double t, const State& y) const {
    const ParticleState s = unpack(like, y);
    const AngularAcceleration acc = accel_from_field(s, drive_field(t));
    const double st = std::sin(s.theta);
    return {st * std::cos(s.phi), st * std::sin(s.phi), std::cos(s.theta), s.theta_dot, s.phi_dot, acc.theta_ddot,
            acc.phi_ddot};
  }

  FieldProgram program_;
  IntegrationOptions options_;
};

/// Integrates from t = 0 to t_end on a uniform grid whose spacing is the
/// largest value <= dt that divides t_end evenly.
inline Trajectory integrate_trajectory(const ParticleState& initial, const FieldProgram& program, double t_end,
                                       double dt, const IntegrationOptions& options = {}) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("dt must be positive");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw DomainError("t_end must be positive");
  const double steps = std::ceil(t_end / dt - 1e-9);
  if (steps > 1e9 || dt < 1e-12 * t_end) throw DomainError("step underflow: dt too small for t_end");
  const auto n = static_cast<long long>(steps);

  const TrajectoryIntegrator integrator(program, options);
  Trajectory traj;
  traj.dt = t_end / static_cast<double>(n);
  traj.samples.reserve(static_cast<std::size_t>(n) + 1);

  ParticleState state = initial;
  for (long long i = 0;; ++i) {
    const double t = t_end * static_cast<double>(i) / static_cast<double>(n);
    traj.samples.push_back(integrator.observe(state, t));
    const double residual = traj.samples.back().constraint_residual;
    if (!(residual <= options.constraint_tolerance)) throw ConstraintViolation(t, residual, std::move(traj));
    if (i == n) break;
    const double t_next = t_end * static_cast<double>(i + 1) / static_cast<double>(n);
    state = integrator.advance(state, t, t_next - t);
  }
  return traj;
}

}  // namespace weyl
