#pragma once

// Exact two-component spinor solutions of both helicities and a
// finite-difference check of the Weyl equation they satisfy.

#include <array>
#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "weyl/angle_law.hpp"
#include "weyl/scalar_field.hpp"
#include "weyl/types.hpp"

namespace weyl {

using Complex = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Vec2c = Eigen::Vector2cd;

/// sigma^0..sigma^3 and the negative-helicity set sigma'^mu = (sigma^0, -sigma^i).
struct PauliSet {
  std::array<Mat2, 4> sigma;
  std::array<Mat2, 4> sigma_prime;

  static const PauliSet& standard() {
    static const PauliSet set = [] {
      PauliSet p;
      const Complex i{0.0, 1.0};
      p.sigma[0] << 1.0, 0.0, 0.0, 1.0;
      p.sigma[1] << 0.0, 1.0, 1.0, 0.0;
      p.sigma[2] << 0.0, -i, i, 0.0;
      p.sigma[3] << 1.0, 0.0, 0.0, -1.0;
      p.sigma_prime[0] = p.sigma[0];
      for (int k = 1; k < 4; ++k) p.sigma_prime[k] = -p.sigma[k];
      return p;
    }();
    return set;
  }

  const std::array<Mat2, 4>& for_helicity(Helicity h) const {
    return h == Helicity::Positive ? sigma : sigma_prime;
  }
};

struct Spinor {
  Complex c1;
  Complex c2;
  Helicity helicity = Helicity::Positive;

  Vec2c vec() const { return Vec2c(c1, c2); }
  double norm_squared() const { return std::norm(c1) + std::norm(c2); }
};

/// Spinor of the solution family at one event for already-evaluated angles and phase.
inline Spinor build_spinor(const AngleSample& a, double phase, Helicity hel) {
  const Complex global = std::polar(1.0, phase);
  const Complex azimuth = std::polar(1.0, a.phi);
  const double c = std::cos(0.5 * a.theta);
  const double s = std::sin(0.5 * a.theta);
  if (hel == Helicity::Positive) return {c * global, azimuth * s * global, hel};
  return {-s * global, azimuth * c * global, hel};
}

inline Spinor build_spinor(const AngleLaw& law, const PhaseField& h, Helicity hel, const Event& ev) {
  const AngleSample a = law.sample(ev.t);
  return build_spinor(a, h.value(ev, a), hel);
}

/// Expectation psi^dagger M psi.
inline Complex expectation(const Spinor& psi, const Mat2& m) {
  const Vec2c v = psi.vec();
  return v.adjoint() * m * v;
}

/// Euclidean norm of the Weyl operator applied to the built spinor:
///   i sigma^mu d_mu psi + b_mu sigma^mu psi          (positive helicity)
///   i sigma'^mu d_mu psi + b_mu sigma'^mu psi        (negative helicity)
/// with d_mu psi from second-order central differences of width `step`.
inline double weyl_residual(const AngleLaw& law, const PhaseField& h, const FourPotentialField& pot,
                            Helicity hel, const Event& ev, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw DomainError("finite-difference step must be positive");
  const auto& sig = PauliSet::standard().for_helicity(hel);
  const Complex i{0.0, 1.0};

  const Vec2c psi = build_spinor(law, h, hel, ev).vec();
  const FourPotential b = pot(ev);

  Vec2c r = Vec2c::Zero();
  for (int mu = 0; mu < 4; ++mu) {
    const Vec2c plus = build_spinor(law, h, hel, ev.shifted(mu, step)).vec();
    const Vec2c minus = build_spinor(law, h, hel, ev.shifted(mu, -step)).vec();
    const Vec2c d = (plus - minus) / (2.0 * step);
    r += sig[mu] * (i * d + b[mu] * psi);
  }
  return r.norm();
}

}  // namespace weyl
