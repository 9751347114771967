#pragma once

// Kinematic observables of the spinor family: velocity, kinetic 4-momentum,
// localization parameter k, energy rate, uncertainty product and SI rates.
//
// The gauge scalar s enters the kinetic momentum as a function of time only.

#include <cmath>

#include "weyl/angle_law.hpp"
#include "weyl/scalar_field.hpp"
#include "weyl/types.hpp"

namespace weyl {

using Velocity3 = Vec3;

/// (sin(theta)cos(phi), sin(theta)sin(phi), cos(theta)) for either helicity.
inline Velocity3 velocity(const AngleSample& a, Helicity /*hel*/ = Helicity::Positive) {
  const double st = std::sin(a.theta);
  return {st * std::cos(a.phi), st * std::sin(a.phi), std::cos(a.theta)};
}

inline Velocity3 velocity(const AngleLaw& law, Helicity hel, double t) { return velocity(law.sample(t), hel); }

struct KineticMomentum {
  double pi_t = 0.0;
  double pi_x = 0.0;
  double pi_y = 0.0;
  double pi_z = 0.0;

  double energy() const { return pi_t; }
  Vec3 momentum() const { return -Vec3(pi_x, pi_y, pi_z); }
};

inline KineticMomentum kinetic_momentum(const AngleSample& a, double s, Helicity hel) {
  const double sgn = helicity_sign(hel);
  const Vec3 v = velocity(a);
  KineticMomentum m;
  m.pi_t = -sgn * 0.5 * std::cos(a.theta) * a.phi_dot - s;
  m.pi_x = -sgn * 0.5 * std::sin(a.phi) * a.theta_dot + s * v.x();
  m.pi_y = sgn * 0.5 * std::cos(a.phi) * a.theta_dot + s * v.y();
  m.pi_z = sgn * 0.5 * a.phi_dot + s * v.z();
  return m;
}

namespace detail {
inline void require_time_only(const GaugeScalar& s) {
  if (s.depends_on_space()) throw DomainError("gauge scalar must depend on time only here");
}
}  // namespace detail

inline KineticMomentum kinetic_momentum(const AngleLaw& law, const GaugeScalar& s, Helicity hel, double t) {
  detail::require_time_only(s);
  const AngleSample a = law.sample(t);
  return kinetic_momentum(a, s.value(Event{0, 0, 0, t}, a), hel);
}

struct LocalizationSample {
  double k = 0.0;
  /// |m*|; the mass-like parameter itself is imaginary, m* = i k.
  double m_star_magnitude = 0.0;
};

/// k = (1/2) sqrt(sin^2(theta) phi'^2 + theta'^2).
inline LocalizationSample localization_k(const AngleSample& a) {
  const double st = std::sin(a.theta);
  const double k = 0.5 * std::sqrt(st * st * a.phi_dot * a.phi_dot + a.theta_dot * a.theta_dot);
  return {k, k};
}

inline LocalizationSample localization_k(const AngleLaw& law, double t) { return localization_k(law.sample(t)); }

/// dE0/dt = +-(1/2)(sin(theta) theta' phi' - cos(theta) phi'') - ds/dt.
inline double energy_rate(const AngleSample& a, double ds_dt, Helicity hel) {
  return helicity_sign(hel) * 0.5 * (std::sin(a.theta) * a.theta_dot * a.phi_dot - std::cos(a.theta) * a.phi_ddot) -
         ds_dt;
}

inline double energy_rate(const AngleLaw& law, const GaugeScalar& s, Helicity hel, double t) {
  detail::require_time_only(s);
  const AngleSample a = law.sample(t);
  return energy_rate(a, s.gradient(Event{0, 0, 0, t}, a).dt, hel);
}

/// E0^2 - |p|^2, which equals -k^2 for every s.
inline double mass_shell_defect(const AngleSample& a, double s, Helicity hel) {
  const KineticMomentum m = kinetic_momentum(a, s, hel);
  return m.energy() * m.energy() - m.momentum().squaredNorm();
}

inline double mass_shell_defect(const AngleLaw& law, const GaugeScalar& s, Helicity hel, double t) {
  const KineticMomentum m = kinetic_momentum(law, s, hel, t);
  return m.energy() * m.energy() - m.momentum().squaredNorm();
}

/// |p x v|, which equals k.
inline double momentum_noncollinearity(const AngleSample& a, double s, Helicity hel) {
  return kinetic_momentum(a, s, hel).momentum().cross(velocity(a)).norm();
}

inline double momentum_noncollinearity(const AngleLaw& law, const GaugeScalar& s, Helicity hel, double t) {
  return kinetic_momentum(law, s, hel, t).momentum().cross(velocity(law, hel, t)).norm();
}

struct UncertaintySample {
  double p0d = 0.0;
  double d_delta_p = 0.0;
};

/// Positive root x of 2 p0d x + x^2 = 1, i.e. x = -p0d + sqrt(1 + p0d^2),
/// evaluated as 1 / (p0d + sqrt(1 + p0d^2)) to avoid cancellation.
inline UncertaintySample uncertainty_relation(double p0d) {
  if (!(p0d >= 0.0) || !std::isfinite(p0d)) throw DomainError("p0*d must be finite and non-negative");
  return {p0d, 1.0 / (p0d + std::hypot(1.0, p0d))};
}

/// Diameter of the circular orbit for a pure theta rotation at rate omega1.
inline double localization_diameter(double omega1) {
  if (omega1 == 0.0) throw DomainError("localization diameter needs a non-zero rotation rate");
  return 2.0 / std::abs(omega1);
}

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s

struct SiRates {
  double eV_per_meter = 0.0;
  double eV_per_second = 0.0;
};

/// Energy (or k) change rates for a charge of q electron charges in a field of
/// |E| volts per metre.
inline SiRates si_rates(double field_V_per_m, double q_in_electron_charges) {
  const double per_meter = std::abs(q_in_electron_charges) * std::abs(field_V_per_m);
  return {per_meter, per_meter * kSpeedOfLight};
}

inline SiRates si_rates(const Vec3& field_V_per_m, double q_in_electron_charges) {
  return si_rates(field_V_per_m.norm(), q_in_electron_charges);
}

}  // namespace weyl
