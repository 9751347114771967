#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <string_view>

#include <Eigen/Dense>

#include "weyl/error.hpp"
#include "weyl/scalar_field.hpp"

namespace weyl {

using Vec3 = Eigen::Vector3d;

enum class Helicity { Positive, Negative };

inline constexpr std::string_view to_string(Helicity h) {
  return h == Helicity::Positive ? "positive" : "negative";
}

/// +1 for positive helicity, -1 for negative.
inline constexpr double helicity_sign(Helicity h) { return h == Helicity::Positive ? 1.0 : -1.0; }

/// Electric charge in natural units. Never zero.
class ChargeSpec {
 public:
  explicit ChargeSpec(double q) : q_(q) {
    if (q == 0.0 || !std::isfinite(q)) throw DomainError("charge q must be finite and non-zero");
  }
  double value() const { return q_; }

 private:
  double q_;
};

/// Charge-scaled 4-potential (b0, b1, b2, b3) = q (A_0, A_1, A_2, A_3) at one event.
struct FourPotential {
  std::array<double, 4> b{};

  double operator[](std::size_t mu) const { return b[mu]; }
  double& operator[](std::size_t mu) { return b[mu]; }
};

enum class PotentialFamily { BasePositive, BaseNegative, Degenerate, Custom };

inline constexpr std::string_view to_string(PotentialFamily f) {
  switch (f) {
    case PotentialFamily::BasePositive: return "base_positive";
    case PotentialFamily::BaseNegative: return "base_negative";
    case PotentialFamily::Degenerate: return "degenerate";
    case PotentialFamily::Custom: return "custom";
  }
  return "?";
}

/// A 4-potential as a function over events, tagged with the family it came from.
struct FourPotentialField {
  std::function<FourPotential(const Event&)> fn;
  PotentialFamily family = PotentialFamily::Custom;

  FourPotential operator()(const Event& ev) const { return fn(ev); }
};

struct EMField {
  Vec3 E = Vec3::Zero();
  Vec3 B = Vec3::Zero();
};

}  // namespace weyl
