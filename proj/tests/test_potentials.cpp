#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include "support.hpp"

namespace weyl {
namespace {

using test::kPi;

void expect_vec(const Vec3& actual, const Vec3& expected, double tol, const std::string& what = {}) {
  EXPECT_LE((actual - expected).norm(), tol) << what << " actual=(" << actual.transpose() << ") expected=("
                                             << expected.transpose() << ")";
}

void expect_four(const FourPotential& b, std::array<double, 4> expected, double tol) {
  for (std::size_t mu = 0; mu < 4; ++mu) EXPECT_NEAR(b[mu], expected[mu], tol) << "component " << mu;
}

const ChargeSpec kUnit(1.0);

TEST(BasePotential, PlaneWaveAlongZ) {
  const FourPotential b =
      base_potential(AngleLaw::fixed(0, 0), PhaseField::plane_wave(2.0), Helicity::Positive, Event{0.3, -0.2, 0.5, 1.0});
  expect_four(b, {-2, 0, 0, 2}, 1e-15);
}

TEST(BasePotential, ThetaRotation) {
  const AngleLaw law = AngleLaw::linear(0, std::sqrt(3.0), 0, 0);
  expect_four(base_potential(law, PhaseField::zero(), Helicity::Positive, Event{}), {0, 0, -std::sqrt(3.0) / 2, 0},
              1e-15);
}

TEST(BasePotential, ConstantAnglesVanish) {
  for (Helicity hel : {Helicity::Positive, Helicity::Negative}) {
    expect_four(base_potential(AngleLaw::fixed(1.2, 0.3), PhaseField::zero(), hel, Event{1, 2, 3, 4}), {0, 0, 0, 0},
                0.0);
  }
}

TEST(KappaVector, Examples) {
  const KappaVector up = kappa_vector(AngleLaw::fixed(0, 0.7), 0.0);
  expect_four(FourPotential{up.k}, {1, 0, 0, -1}, 1e-16);
  const KappaVector x = kappa_vector(AngleLaw::fixed(kPi / 2, 0), 0.0);
  expect_four(FourPotential{x.k}, {1, -1, 0, 0}, 1e-16);
}

TEST(KappaVector, SpatialPartIsMinusVelocity) {
  test::Rng rng(1);
  for (int i = 0; i < 500; ++i) {
    const AngleLaw law = AngleLaw::linear(rng.uniform(-3, 3), rng.uniform(-2, 2), rng.uniform(-3, 3), rng.uniform(-2, 2));
    const double t = rng.uniform(0, 10);
    expect_vec(kappa_vector(law, t).spatial(), -velocity(law, Helicity::Positive, t), 1e-14);
  }
}

TEST(DegeneratePotential, ZeroScalarIsIdentity) {
  const AngleLaw law = AngleLaw::linear(0.4, 1.0, 0.2, -0.5);
  const FourPotentialField base = base_potential_field(law, PhaseField::plane_wave(1.0), Helicity::Positive);
  const FourPotentialField deg = degenerate_potential(base, law, GaugeScalar::zero());
  test::Rng rng(2);
  for (int i = 0; i < 20; ++i) {
    const Event ev = rng.event();
    for (std::size_t mu = 0; mu < 4; ++mu) EXPECT_EQ(deg(ev)[mu], base(ev)[mu]);
  }
}

TEST(DegeneratePotential, ConstantScalarAddsKappa) {
  const AngleLaw law = AngleLaw::fixed(kPi / 2, 0);
  const FourPotentialField base = base_potential_field(law, PhaseField::plane_wave(1.0), Helicity::Positive);
  const FourPotentialField deg = degenerate_potential(base, law, GaugeScalar::constant(2.5));
  const Event ev{0.1, 0.2, 0.3, 0.4};
  const FourPotential a = base(ev);
  expect_four(deg(ev), {a[0] + 2.5, a[1] - 2.5, a[2], a[3]}, 1e-15);
}

TEST(NumericField, ConstantPotentialHasNoField) {
  const FourPotentialField pot{[](const Event&) { return FourPotential{{1.0, -2.0, 3.0, 0.5}}; },
                               PotentialFamily::Custom};
  const EMField f = field_from_potential_numeric(pot, kUnit, Event{0.3, 0.1, 0.2, 1.0}, 1e-5);
  expect_vec(f.E, Vec3::Zero(), 0.0);
  expect_vec(f.B, Vec3::Zero(), 0.0);
}

TEST(NumericField, RejectsZeroCharge) { EXPECT_THROW(ChargeSpec(0.0), DomainError); }

// Independent oracle: a uniform magnetic field from a symmetric-gauge vector potential.
TEST(NumericField, SymmetricGaugeMagneticField) {
  // A = (B0/2)(-y, x, 0), so b_vec = -q A; B = curl A = (0, 0, B0).
  const double q = 2.0, B0 = 0.75;
  const FourPotentialField pot{[&](const Event& ev) {
                                 return FourPotential{{0.0, q * B0 / 2 * ev.y, -q * B0 / 2 * ev.x, 0.0}};
                               },
                               PotentialFamily::Custom};
  const EMField f = field_from_potential_numeric(pot, ChargeSpec(q), Event{0.4, -0.3, 0.2, 0.0}, 1e-5);
  expect_vec(f.B, Vec3(0, 0, B0), 1e-10);
  expect_vec(f.E, Vec3::Zero(), 1e-10);
}

TEST(NumericField, GaugePotentialLinearInTime) {
  const AngleLaw law = AngleLaw::fixed(kPi / 2, 0);
  const FourPotentialField zero{[](const Event&) { return FourPotential{}; }, PotentialFamily::Custom};
  const FourPotentialField pot = degenerate_potential(zero, law, GaugeScalar::parse("t"));
  const EMField f = field_from_potential_numeric(pot, kUnit, Event{0.2, 0.1, -0.4, 0.7}, 1e-5);
  expect_vec(f.E, Vec3(-1, 0, 0), 1e-9);
  expect_vec(f.B, Vec3::Zero(), 1e-9);
}

TEST(NumericField, MixedRotationAtOrigin) {
  const AngleLaw law = AngleLaw::linear(kPi / 2, std::sqrt(3.0), 0, std::sqrt(5.0));
  const FourPotentialField pot = base_potential_field(law, PhaseField::zero(), Helicity::Positive);
  const EMField f = field_from_potential_numeric(pot, kUnit, Event{}, 1e-5);
  expect_vec(f.E, Vec3(std::sqrt(15.0) / 2, 0, 0), 1e-6);
}

TEST(DriveField, ConstantAnglesGiveZero) {
  for (Helicity hel : {Helicity::Positive, Helicity::Negative}) {
    const EMField f = drive_field_closed_form(AngleLaw::fixed(0.3, 1.2), hel, kUnit, 4.0);
    expect_vec(f.E, Vec3::Zero(), 0.0);
    expect_vec(f.B, Vec3::Zero(), 0.0);
  }
}

TEST(DriveField, MixedRotationBothHelicities) {
  const AngleLaw law = AngleLaw::linear(kPi / 2, std::sqrt(3.0), 0, std::sqrt(5.0));
  expect_vec(drive_field_closed_form(law, Helicity::Positive, kUnit, 0).E, Vec3(std::sqrt(15.0) / 2, 0, 0), 1e-15);
  expect_vec(drive_field_closed_form(law, Helicity::Negative, kUnit, 0).E, Vec3(-std::sqrt(15.0) / 2, 0, 0), 1e-15);
}

TEST(DriveField, HelicityAntisymmetry) {
  test::Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const AngleLaw law = AngleLaw::linear(rng.uniform(-3, 3), rng.uniform(-2, 2), rng.uniform(-3, 3), rng.uniform(-2, 2));
    const ChargeSpec q(rng.uniform(0.5, 2.0));
    const double t = rng.uniform(0, 10);
    expect_vec(drive_field_closed_form(law, Helicity::Negative, q, t).E,
               -drive_field_closed_form(law, Helicity::Positive, q, t).E, 0.0);
  }
}

TEST(DriveField, ZeroExactlyUnderZeroFieldCondition) {
  struct Law {
    AngleLaw law;
    bool zero;
  };
  const std::vector<Law> laws{{AngleLaw::fixed(0.4, 1.0), true},
                              {AngleLaw::linear(0.4, 2.0, 1.0, 0.0), true},
                              {AngleLaw::linear(0.4, 0.0, 1.0, -3.0), true},
                              {AngleLaw::linear(0.4, 2.0, 1.0, -3.0), false}};
  for (const Law& l : laws) {
    for (double t : {0.0, 0.7, 5.0}) {
      const AngleSample a = l.law.sample(t);
      const double e = drive_field_closed_form(a, Helicity::Positive, kUnit).E.norm();
      EXPECT_EQ(zero_field_condition(a), l.zero);
      if (l.zero) {
        EXPECT_EQ(e, 0.0);
      } else {
        EXPECT_GT(e, 0.0);
      }
    }
  }
}

TEST(DriveField, MixedRotationFormMatchesGeneralForm) {
  test::Rng rng(4);
  for (int i = 0; i < 100; ++i) {
    const double w1 = rng.uniform(-3, 3), w2 = rng.uniform(-3, 3), phi0 = rng.uniform(0, 6), t = rng.uniform(0, 10);
    const AngleLaw law = AngleLaw::linear(rng.uniform(0, 3), w1, phi0, w2);
    for (Helicity hel : {Helicity::Positive, Helicity::Negative}) {
      const ChargeSpec q(rng.uniform(-2, 2) + 3.0);
      expect_vec(mixed_rotation_field(w1, w2, phi0, hel, q, t).E, drive_field_closed_form(law, hel, q, t).E, 1e-13);
    }
  }
}

struct LawCase {
  std::string label;
  AngleLaw law;
};

std::vector<LawCase> law_cases() {
  std::vector<LawCase> out{{"theta_rotation", AngleLaw::linear(0.3, 1.5, 0.0, 0.0)},
                           {"phi_rotation", AngleLaw::linear(0.8, 0.0, 0.2, -2.0)},
                           {"mixed", AngleLaw::linear(kPi / 2, std::sqrt(3.0), 0.0, std::sqrt(5.0))},
                           {"mixed_slow", AngleLaw::linear(1.0, -0.4, 2.0, 0.6)}};
  AngleLaw custom;
  custom.theta = TimeLaw::custom(parse_expr("1 + 0.5*sin(t)"));
  custom.phi = TimeLaw::custom(parse_expr("t^2/4"));
  out.push_back({"custom", custom});
  return out;
}

TEST(DriveField, ClosedFormMatchesNumericDerivative) {
  const double step = 1e-5;
  const double tol = std::max(1e-6, 10 * step * step);
  test::Rng rng(5);
  for (const LawCase& c : law_cases()) {
    for (Helicity hel : {Helicity::Positive, Helicity::Negative}) {
      const ChargeSpec q(hel == Helicity::Positive ? 1.0 : -0.5);
      const FourPotentialField pot = base_potential_field(c.law, PhaseField::plane_wave(1.3), hel);
      for (int i = 0; i < 50; ++i) {
        const Event ev = rng.event();
        const EMField numeric = field_from_potential_numeric(pot, q, ev, step);
        expect_vec(drive_field_closed_form(c.law, hel, q, ev.t).E, numeric.E, tol, c.label);
        expect_vec(numeric.B, Vec3::Zero(), tol, c.label + " B");
      }
    }
  }
}

TEST(GaugeField, ConstantScalarOnConstantAngles) {
  const EMField f = gauge_family_field(AngleLaw::fixed(0.5, 0.5), GaugeScalar::constant(-4), kUnit, Event{1, 1, 1, 1});
  expect_vec(f.E, Vec3::Zero(), 0.0);
  expect_vec(f.B, Vec3::Zero(), 0.0);
}

TEST(GaugeField, LinearInTime) {
  const EMField f = gauge_family_field(AngleLaw::fixed(kPi / 2, 0), GaugeScalar::parse("t"), kUnit, Event{});
  expect_vec(f.E, Vec3(-1, 0, 0), 1e-15);
  expect_vec(f.B, Vec3::Zero(), 1e-15);
}

TEST(GaugeField, LinearInZ) {
  const EMField f = gauge_family_field(AngleLaw::fixed(kPi / 2, 0), GaugeScalar::parse("z"), kUnit, Event{});
  expect_vec(f.E, Vec3(0, 0, -1), 1e-15);
  expect_vec(f.B, Vec3(0, 1, 0), 1e-15);
}

TEST(GaugeField, TimeOnlyScalarHasNoMagneticField) {
  test::Rng rng(6);
  for (const LawCase& c : law_cases()) {
    for (int i = 0; i < 20; ++i) {
      const EMField f = gauge_family_field(c.law, GaugeScalar::parse("sin(t) + t^2"), ChargeSpec(1.5), rng.event());
      expect_vec(f.B, Vec3::Zero(), 0.0);
    }
  }
}

TEST(GaugeField, ClosedFormMatchesNumericDerivative) {
  const std::vector<std::string> scalars{"-3", "2*t", "sin(2*t) - 1", "z", "x*y - t*z", "exp(-t)*cos(x + 2*y)"};
  const double step = 1e-5;
  const double tol = std::max(1e-6, 10 * step * step);
  const FourPotentialField zero{[](const Event&) { return FourPotential{}; }, PotentialFamily::Custom};
  test::Rng rng(7);
  for (const LawCase& c : law_cases()) {
    for (const std::string& s_text : scalars) {
      const GaugeScalar s = GaugeScalar::parse(s_text);
      const FourPotentialField pot = degenerate_potential(zero, c.law, s);
      const ChargeSpec q(-1.25);
      for (int i = 0; i < 50; ++i) {
        const Event ev = rng.event();
        const EMField closed = gauge_family_field(c.law, s, q, ev);
        const EMField numeric = field_from_potential_numeric(pot, q, ev, step);
        expect_vec(closed.E, numeric.E, tol, c.label + " s=" + s_text + " E");
        expect_vec(closed.B, numeric.B, tol, c.label + " s=" + s_text + " B");
      }
    }
  }
}

TEST(EnergyControl, Examples) {
  expect_vec(energy_control_field(0.0, AngleLaw::fixed(0.3, 0.3), kUnit, 0).E, Vec3::Zero(), 0.0);
  expect_vec(energy_control_field(2.0, AngleLaw::fixed(kPi / 2, 0), kUnit, 0).E, Vec3(2, 0, 0), 1e-15);
  expect_vec(energy_control_field(1.0, AngleLaw::fixed(0, 0), kUnit, 0).E, Vec3(0, 0, 1), 0.0);
  expect_vec(energy_control_field(1.0, AngleLaw::fixed(0, 0), ChargeSpec(-2.0), 0).E, Vec3(0, 0, -0.5), 0.0);
}

TEST(EnergyControl, RejectsDrivenAngles) {
  EXPECT_THROW(energy_control_field(1.0, AngleLaw::linear(0.3, 1.0, 0.0, 1.0), kUnit, 0), DomainError);
}

// The energy field is the gauge-family field of s with ds/dt = -q E.v, so it
// can be realized without touching the spinor.
TEST(EnergyControl, RealizedByGaugeScalar) {
  const AngleLaw law = AngleLaw::fixed(1.0, 0.4);
  const ChargeSpec q(1.5);
  const double rate = 0.8;
  const GaugeScalar s = GaugeScalar::parse("-0.8*t");  // ds/dt = -dE/dt
  const EMField target = energy_control_field(rate, law, q, 2.0);
  const EMField realized = gauge_family_field(law, s, q, Event{0, 0, 0, 2.0});
  expect_vec(realized.E, target.E, 1e-15);
}

TEST(KControl, Examples) {
  const KControlMode az = AzimuthalControl{kPi / 2};
  const KControlMode polar = PolarControl{0.0};
  expect_vec(k_control_field(0.0, az, Helicity::Positive, kUnit).E, Vec3::Zero(), 0.0);
  expect_vec(k_control_field(0.0, polar, Helicity::Positive, kUnit).E, Vec3::Zero(), 0.0);
  expect_vec(k_control_field(-0.5, az, Helicity::Positive, kUnit).E, Vec3(0, 0, 0.5), 1e-16);
  expect_vec(k_control_field(1.0, polar, Helicity::Positive, kUnit).E, Vec3(0, -1, 0), 1e-16);
  expect_vec(k_control_field(1.0, polar, Helicity::Negative, kUnit).E, Vec3(0, 1, 0), 1e-16);
}

TEST(KControl, AzimuthalRejectsPoles) {
  for (double theta0 : {0.0, kPi, -0.1}) {
    EXPECT_THROW(k_control_field(1.0, AzimuthalControl{theta0}, Helicity::Positive, kUnit), DomainError);
  }
}

// Control fields are drive fields: check against the numeric field of a
// potential whose angles follow the accelerations the field produces.
TEST(KControl, MatchesDriveFieldOfAcceleratedLaw) {
  const double dk = 0.3, q = 1.0, theta0 = 1.1, phi0 = 0.6;
  {
    // Azimuthal: k = sin(theta0) phi'/2, so phi'' = 2 dk / sin(theta0).
    const double phi_dd = 2 * dk / std::sin(theta0);
    AngleLaw law;
    law.theta = TimeLaw::constant(theta0);
    law.phi = TimeLaw::custom(parse_expr("0.2 + 3*t + " + format_csv_number(phi_dd / 2) + "*t^2"));
    const FourPotentialField pot = base_potential_field(law, PhaseField::zero(), Helicity::Positive);
    const EMField numeric = field_from_potential_numeric(pot, ChargeSpec(q), Event{0.1, 0.2, 0.3, 0.5}, 1e-5);
    expect_vec(k_control_field(dk, AzimuthalControl{theta0}, Helicity::Positive, ChargeSpec(q)).E, numeric.E, 1e-6);
  }
  {
    // Polar: k = theta'/2, so theta'' = 2 dk.
    AngleLaw law;
    law.theta = TimeLaw::custom(parse_expr("0.5 + 2*t + " + format_csv_number(dk) + "*t^2"));
    law.phi = TimeLaw::constant(phi0);
    const FourPotentialField pot = base_potential_field(law, PhaseField::zero(), Helicity::Positive);
    const EMField numeric = field_from_potential_numeric(pot, ChargeSpec(q), Event{0.1, 0.2, 0.3, 0.5}, 1e-5);
    expect_vec(k_control_field(dk, PolarControl{phi0}, Helicity::Positive, ChargeSpec(q)).E, numeric.E, 1e-6);
  }
}

}  // namespace
}  // namespace weyl
