#pragma once

// 4-potentials for which the spinor family solves the Weyl equation, and the
// electromagnetic fields they describe, both by numerical differentiation and
// in closed form.
//
// Conventions: U = b0 / q and A = -(b1, b2, b3) / q, so
//   E = (-grad b0 + d/dt (b1, b2, b3)) / q,   B = -curl (b1, b2, b3) / q.

#include <cmath>
#include <numbers>
#include <variant>

#include "weyl/angle_law.hpp"
#include "weyl/scalar_field.hpp"
#include "weyl/types.hpp"

namespace weyl {

/// (1, -sin(theta)cos(phi), -sin(theta)sin(phi), -cos(theta)); identical for both helicities.
struct KappaVector {
  std::array<double, 4> k{1.0, 0.0, 0.0, 0.0};

  double operator[](std::size_t mu) const { return k[mu]; }
  Vec3 spatial() const { return {k[1], k[2], k[3]}; }
};

inline KappaVector kappa_vector(const AngleSample& a) {
  const double st = std::sin(a.theta);
  return {{1.0, -st * std::cos(a.phi), -st * std::sin(a.phi), -std::cos(a.theta)}};
}

inline KappaVector kappa_vector(const AngleLaw& law, double t) { return kappa_vector(law.sample(t)); }

inline FourPotential base_potential(const AngleSample& a, const FourGradient& dh, Helicity hel) {
  const double sgn = helicity_sign(hel);
  FourPotential b;
  b[0] = dh.dt + 0.5 * a.phi_dot;
  b[1] = dh.dx + sgn * 0.5 * std::sin(a.phi) * a.theta_dot;
  b[2] = dh.dy - sgn * 0.5 * std::cos(a.phi) * a.theta_dot;
  b[3] = dh.dz - sgn * 0.5 * a.phi_dot;
  return b;
}

inline FourPotential base_potential(const AngleLaw& law, const PhaseField& h, Helicity hel, const Event& ev) {
  const AngleSample a = law.sample(ev.t);
  return base_potential(a, h.gradient(ev, a), hel);
}

/// The base potential as a field over events.
inline FourPotentialField base_potential_field(const AngleLaw& law, const PhaseField& h, Helicity hel) {
  return {[law, h, hel](const Event& ev) { return base_potential(law, h, hel, ev); },
          hel == Helicity::Positive ? PotentialFamily::BasePositive : PotentialFamily::BaseNegative};
}

/// b_mu = base_mu + kappa_mu s.
inline FourPotentialField degenerate_potential(const FourPotentialField& base, const AngleLaw& law,
                                               const GaugeScalar& s) {
  return {[base, law, s](const Event& ev) {
            const AngleSample a = law.sample(ev.t);
            const KappaVector kappa = kappa_vector(a);
            const double sv = s.value(ev, a);
            FourPotential b = base(ev);
            for (std::size_t mu = 0; mu < 4; ++mu) b[mu] += kappa[mu] * sv;
            return b;
          },
          PotentialFamily::Degenerate};
}

/// Adds a constant to b0. Used to corrupt a potential on purpose in verification.
inline FourPotentialField offset_potential(const FourPotentialField& base, double delta_b0) {
  return {[base, delta_b0](const Event& ev) {
            FourPotential b = base(ev);
            b[0] += delta_b0;
            return b;
          },
          PotentialFamily::Custom};
}

inline EMField field_from_potential_numeric(const FourPotentialField& pot, const ChargeSpec& q, const Event& ev,
                                            double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw DomainError("finite-difference step must be positive");
  // d[mu][nu] = d_mu b_nu, with mu = 0 for t and 1..3 for x, y, z.
  double d[4][4];
  for (int mu = 0; mu < 4; ++mu) {
    const FourPotential plus = pot(ev.shifted(mu, step));
    const FourPotential minus = pot(ev.shifted(mu, -step));
    for (std::size_t nu = 0; nu < 4; ++nu) d[mu][nu] = (plus[nu] - minus[nu]) / (2.0 * step);
  }
  const double inv_q = 1.0 / q.value();
  EMField f;
  for (int i = 1; i <= 3; ++i) f.E[i - 1] = (-d[i][0] + d[0][i]) * inv_q;
  f.B.x() = -(d[2][3] - d[3][2]) * inv_q;
  f.B.y() = -(d[3][1] - d[1][3]) * inv_q;
  f.B.z() = -(d[1][2] - d[2][1]) * inv_q;
  return f;
}

/// Field of the base potential:
///   E = (1/2q) (cos(phi) theta' phi' + sin(phi) theta'', sin(phi) theta' phi' - cos(phi) theta'', -phi'')
/// for positive helicity, negated for negative helicity; B = 0.
inline EMField drive_field_closed_form(const AngleSample& a, Helicity hel, const ChargeSpec& q) {
  const double scale = helicity_sign(hel) / (2.0 * q.value());
  const double cp = std::cos(a.phi);
  const double sp = std::sin(a.phi);
  const double cross = a.theta_dot * a.phi_dot;
  EMField f;
  f.E = scale * Vec3(cp * cross + sp * a.theta_ddot, sp * cross - cp * a.theta_ddot, -a.phi_ddot);
  return f;
}

inline EMField drive_field_closed_form(const AngleLaw& law, Helicity hel, const ChargeSpec& q, double t) {
  return drive_field_closed_form(law.sample(t), hel, q);
}

/// Drive field for theta = theta0 + omega1 t, phi = phi0 + omega2 t:
///   E = (omega1 omega2 / 2q) (cos(phi0 + omega2 t), sin(phi0 + omega2 t), 0).
inline EMField mixed_rotation_field(double omega1, double omega2, double phi0, Helicity hel, const ChargeSpec& q,
                                    double t) {
  const double phi = phi0 + omega2 * t;
  EMField f;
  f.E = helicity_sign(hel) * omega1 * omega2 / (2.0 * q.value()) * Vec3(std::cos(phi), std::sin(phi), 0.0);
  return f;
}

/// True when theta'' = phi'' = theta' phi' = 0 to within `tol`.
inline bool zero_field_condition(const AngleSample& a, double tol = 0.0) {
  return std::abs(a.theta_ddot) <= tol && std::abs(a.phi_ddot) <= tol && std::abs(a.theta_dot * a.phi_dot) <= tol;
}

/// Field of the gauge part kappa_mu s of the degenerate potential, i.e. of
/// (U, A) = (1, v) s / q with v the unit velocity:
///   E_s = -(1/q) [v ds/dt + grad s + s dv/dt],   B_s = (1/q) grad s x v.
inline EMField gauge_family_field(const AngleSample& a, double s, const FourGradient& ds, const ChargeSpec& q) {
  const double st = std::sin(a.theta), ct = std::cos(a.theta);
  const double sp = std::sin(a.phi), cp = std::cos(a.phi);
  const Vec3 v(st * cp, st * sp, ct);
  const Vec3 v_dot(ct * cp * a.theta_dot - st * sp * a.phi_dot, ct * sp * a.theta_dot + st * cp * a.phi_dot,
                   -st * a.theta_dot);
  const Vec3 grad(ds.dx, ds.dy, ds.dz);
  const double inv_q = 1.0 / q.value();
  EMField f;
  f.E = -inv_q * (v * ds.dt + grad + s * v_dot);
  f.B = inv_q * grad.cross(v);
  return f;
}

inline EMField gauge_family_field(const AngleLaw& law, const GaugeScalar& s, const ChargeSpec& q, const Event& ev) {
  const AngleSample a = law.sample(ev.t);
  return gauge_family_field(a, s.value(ev, a), s.gradient(ev, a), q);
}

/// Field along the direction of motion that changes the energy at rate dE/dt
/// when the angles satisfy the zero-field condition: E = (1/q) dE/dt v, B = 0.
inline EMField energy_control_field(double dE_dt, const AngleLaw& law, const ChargeSpec& q, double t) {
  const AngleSample a = law.sample(t);
  if (!zero_field_condition(a, 1e-12)) {
    throw DomainError("energy control requires theta'' = phi'' = theta' phi' = 0");
  }
  const double st = std::sin(a.theta);
  EMField f;
  f.E = dE_dt / q.value() * Vec3(st * std::cos(a.phi), st * std::sin(a.phi), std::cos(a.theta));
  return f;
}

/// theta held at theta0, k steered through phi'.
struct AzimuthalControl {
  double theta0;
};
/// phi held at phi0, k steered through theta'.
struct PolarControl {
  double phi0;
};
using KControlMode = std::variant<AzimuthalControl, PolarControl>;

/// Field that changes the localization parameter k at rate dk/dt:
///   azimuthal: E = -(1 / (q sin(theta0))) dk/dt z,   theta0 in (0, pi)
///   polar:     E = (1/q) dk/dt (sin(phi0), -cos(phi0), 0)
/// negated for negative helicity; B = 0.
inline EMField k_control_field(double dk_dt, const KControlMode& mode, Helicity hel, const ChargeSpec& q) {
  const double sgn = helicity_sign(hel);
  EMField f;
  if (auto* az = std::get_if<AzimuthalControl>(&mode)) {
    if (!(az->theta0 > 0.0 && az->theta0 < std::numbers::pi)) {
      throw DomainError("azimuthal control requires theta0 in (0, pi)");
    }
    f.E = Vec3(0.0, 0.0, -sgn * dk_dt / (q.value() * std::sin(az->theta0)));
  } else {
    const double phi0 = std::get<PolarControl>(mode).phi0;
    f.E = sgn * dk_dt / q.value() * Vec3(std::sin(phi0), -std::cos(phi0), 0.0);
  }
  return f;
}

}  // namespace weyl
