#pragma once

// Scenario-level operations behind the weyl-dyn command line.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "weyl/dynamics.hpp"
#include "weyl/observables.hpp"
#include "weyl/potentials.hpp"
#include "weyl/report.hpp"
#include "weyl/scenario.hpp"
#include "weyl/spinor.hpp"

namespace weyl {

// ---------------------------------------------------------------------------
// Building blocks
// ---------------------------------------------------------------------------

/// Uniform doubles from a seeded mt19937_64; the mapping top-53-bits / 2^53 is
/// fixed so a seed reproduces the same events on every platform.
class SeededSampler {
 public:
  explicit SeededSampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) {
    const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

 private:
  std::mt19937_64 rng_;
};

inline FieldProgram field_program(const Scenario& sc) {
  if (sc.paper_literal_field) {
    if (sc.preset != Preset::Fig45Control) throw ScenarioError("--paper-literal-field applies to fig45_control only");
    return FieldProgram::constant(Vec3(0.0, 0.0, 1.0 / sc.q));
  }
  switch (sc.field) {
    case FieldKind::None: return FieldProgram::zero();
    case FieldKind::Drive: return FieldProgram::angle_law_drive(sc.law, sc.helicity, sc.charge());
    case FieldKind::Expression: {
      const Parameters p = sc.expression_params();
      std::array<Expr, 3> E, B;
      for (std::size_t i = 0; i < 3; ++i) {
        E[i] = parse_expr(sc.field_E_text[i], p);
        B[i] = parse_expr(sc.field_B_text[i], p);
      }
      return FieldProgram::expressions(E, B);
    }
  }
  return FieldProgram::zero();
}

inline ParticleState initial_state(const Scenario& sc) {
  return ParticleState::from_law(sc.law, sc.helicity, sc.q, 0.0, sc.start);
}

inline IntegrationOptions integration_options(const Scenario& sc) {
  if (sc.s.depends_on_space()) throw ScenarioError("trajectories need s to depend on time only", "s");
  return {sc.constraint_tolerance, sc.s};
}

// ---------------------------------------------------------------------------
// Scenario runs
// ---------------------------------------------------------------------------

struct ScenarioSummary {
  double k_min = 0.0;
  double t_k_min = 0.0;
  double k_max = 0.0;
  double t_k_max = 0.0;
  Vec3 endpoint = Vec3::Zero();
  double max_distance_from_start = 0.0;
  double max_speed_deviation = 0.0;
  double max_constraint_residual = 0.0;
  /// First time k reaches zero (interior minimum with k ~ 0), if any.
  std::optional<double> k_zero_time;
  /// First time after k_zero_time that k returns to its initial value.
  std::optional<double> k_recovery_time;
};

struct ScenarioRun {
  Trajectory trajectory;
  ScenarioSummary summary;
};

namespace detail {

/// k along one RK4 step from a grid sample; accurate to O(h^5) inside the step.
class LocalK {
 public:
  LocalK(const TrajectoryIntegrator& integ, const TrajectorySample& from, Helicity hel, double q)
      : integ_(integ), from_(TrajectoryIntegrator::state_of(from, hel, q)), t0_(from.t) {}

  double operator()(double t) const {
    const ParticleState s = integ_.advance(from_, t0_, t - t0_);
    return localization_k(s.angles()).k;
  }

 private:
  const TrajectoryIntegrator& integ_;
  ParticleState from_;
  double t0_;
};

struct Extremum {
  double t;
  double value;
};

inline Extremum refine_extremum(const TrajectoryIntegrator& integ, const Trajectory& traj, std::size_t i,
                                Helicity hel, double q, bool maximize) {
  const auto& s = traj.samples;
  if (i == 0 || i + 1 >= s.size()) return {s[i].t, s[i].k};
  const LocalK k(integ, s[i - 1], hel, q);
  const double sign = maximize ? -1.0 : 1.0;
  auto [t, v] = boost::math::tools::brent_find_minima([&](double tt) { return sign * k(tt); }, s[i - 1].t,
                                                      s[i + 1].t, std::numeric_limits<double>::digits);
  const double value = sign * v;
  if (maximize ? value < s[i].k : value > s[i].k) return {s[i].t, s[i].k};
  return {t, value};
}

}  // namespace detail

inline ScenarioSummary summarize(const TrajectoryIntegrator& integ, const Trajectory& traj, Helicity hel, double q) {
  ScenarioSummary sum;
  const auto& s = traj.samples;
  if (s.empty()) return sum;

  std::size_t imin = 0, imax = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i].k < s[imin].k) imin = i;
    if (s[i].k > s[imax].k) imax = i;
    sum.max_distance_from_start = std::max(sum.max_distance_from_start, (s[i].position - s.front().position).norm());
    sum.max_speed_deviation = std::max(sum.max_speed_deviation, std::abs(s[i].velocity.norm() - 1.0));
    sum.max_constraint_residual = std::max(sum.max_constraint_residual, s[i].constraint_residual);
  }
  sum.endpoint = s.back().position;

  const bool flat = s[imax].k - s[imin].k <= 1e-14 * std::max(1.0, s[imax].k);
  const auto lo = flat ? detail::Extremum{s[imin].t, s[imin].k} : detail::refine_extremum(integ, traj, imin, hel, q, false);
  const auto hi = flat ? detail::Extremum{s[imax].t, s[imax].k} : detail::refine_extremum(integ, traj, imax, hel, q, true);
  sum.k_min = lo.value;
  sum.t_k_min = lo.t;
  sum.k_max = hi.value;
  sum.t_k_max = hi.t;

  // Momentary free particle: k touches zero in the interior.
  const double k0 = s.front().k;
  const double zero_tol = 1e-6 * std::max(1.0, k0);
  std::optional<std::size_t> izero;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    if (s[i].k <= zero_tol && s[i].k <= s[i - 1].k && s[i].k <= s[i + 1].k) {
      izero = i;
      break;
    }
  }
  if (izero && k0 > zero_tol) {
    const auto z = detail::refine_extremum(integ, traj, *izero, hel, q, false);
    sum.k_zero_time = z.t;
    for (std::size_t i = *izero + 1; i < s.size(); ++i) {
      if (s[i].k >= k0) {
        const detail::LocalK k(integ, s[i - 1], hel, q);
        boost::math::tools::eps_tolerance<double> tol(std::numeric_limits<double>::digits - 4);
        std::uintmax_t iters = 64;
        auto [a, b] = boost::math::tools::toms748_solve([&](double t) { return k(t) - k0; }, s[i - 1].t, s[i].t,
                                                        s[i - 1].k - k0, s[i].k - k0, tol, iters);
        sum.k_recovery_time = 0.5 * (a + b);
        break;
      }
      if (i + 1 == s.size() && s[i].k >= k0 - 1e-9 * std::max(1.0, k0)) sum.k_recovery_time = s[i].t;
    }
  }
  return sum;
}

/// Integrates the scenario and summarizes the trajectory. Propagates
/// ConstraintViolation when the field program leaves the solution family.
inline ScenarioRun run_scenario(const Scenario& sc) {
  const FieldProgram program = field_program(sc);
  const IntegrationOptions options = integration_options(sc);
  Trajectory traj = integrate_trajectory(initial_state(sc), program, sc.t_end, sc.dt, options);
  const TrajectoryIntegrator integ(program, options);
  ScenarioSummary sum = summarize(integ, traj, sc.helicity, sc.q);
  return {std::move(traj), sum};
}

// ---------------------------------------------------------------------------
// CSV output
// ---------------------------------------------------------------------------

namespace detail {

inline double column_value(const TrajectorySample& s, std::size_t column) {
  switch (column) {
    case 0: return s.t;
    case 1: return s.position.x();
    case 2: return s.position.y();
    case 3: return s.position.z();
    case 4: return s.velocity.x();
    case 5: return s.velocity.y();
    case 6: return s.velocity.z();
    case 7: return s.theta;
    case 8: return s.phi;
    case 9: return s.k;
    case 10: return s.energy;
    case 11: return s.momentum.x();
    case 12: return s.momentum.y();
    case 13: return s.momentum.z();
    case 14: return s.field.x();
    case 15: return s.field.y();
    case 16: return s.field.z();
    default: return s.constraint_residual;
  }
}

}  // namespace detail

inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj,
                                 const std::vector<std::string>& columns = trajectory_columns()) {
  std::vector<std::size_t> index;
  for (const std::string& c : columns) {
    auto it = std::find(trajectory_columns().begin(), trajectory_columns().end(), c);
    if (it == trajectory_columns().end()) throw Error("unknown CSV column '" + c + "'");
    index.push_back(static_cast<std::size_t>(it - trajectory_columns().begin()));
  }
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << "\n";
  for (const TrajectorySample& s : traj.samples) {
    for (std::size_t i = 0; i < index.size(); ++i) {
      os << (i ? "," : "") << format_csv_number(detail::column_value(s, index[i]));
    }
    os << "\n";
  }
  os.flush();
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

/// Runs the invariant suite at `sample_count` seeded random events in
/// [-1, 1]^3 x [0, t_end]. Failures are report entries, not exceptions.
inline RunReport cmd_verify(const Scenario& sc) {
  RunReport report;
  report.scenario = sc.name;
  report.seed = sc.seed;
  const ChargeSpec q = sc.charge();
  const double step = sc.fd_step;
  const double field_tol = std::max(1e-6, 10.0 * step * step);
  const auto& sig = PauliSet::standard().for_helicity(sc.helicity);

  SeededSampler rng(sc.seed);
  std::vector<Event> events;
  for (int i = 0; i < sc.sample_count; ++i) {
    Event ev;
    ev.x = rng.uniform(-1.0, 1.0);
    ev.y = rng.uniform(-1.0, 1.0);
    ev.z = rng.uniform(-1.0, 1.0);
    ev.t = rng.uniform(0.0, sc.t_end);
    events.push_back(ev);
  }

  // Random gauge scalars: constant, linear in t, spatially varying.
  std::vector<GaugeScalar> random_s;
  {
    Parameters p{{"a", rng.uniform(-3.0, 3.0)}, {"b", rng.uniform(-3.0, 3.0)}, {"c", rng.uniform(-3.0, 3.0)}};
    random_s.push_back(GaugeScalar::parse("a", p));
    random_s.push_back(GaugeScalar::parse("a + b*t", p));
    random_s.push_back(GaugeScalar::parse("a*x + b*sin(y) + c*z*t", p));
  }

  const FourPotentialField base = base_potential_field(sc.law, sc.h, sc.helicity);
  const FourPotentialField checked = sc.potential_offset != 0.0 ? offset_potential(base, sc.potential_offset) : base;
  const FourPotentialField degenerate = degenerate_potential(checked, sc.law, sc.s);
  const FourPotentialField zero{[](const Event&) { return FourPotential{}; }, PotentialFamily::Custom};
  const FourPotentialField gauge_only = degenerate_potential(zero, sc.law, sc.s);

  double r_base = 0.0, r_deg = 0.0, r_rand = 0.0;
  double speed = 0.0, kappa = 0.0, shell = 0.0, cross = 0.0, dot = 0.0;
  double drive_err = 0.0, drive_b = 0.0, gauge_err = 0.0;
  for (const Event& ev : events) {
    r_base = std::max(r_base, weyl_residual(sc.law, sc.h, checked, sc.helicity, ev, step));
    r_deg = std::max(r_deg, weyl_residual(sc.law, sc.h, degenerate, sc.helicity, ev, step));
    for (const GaugeScalar& s : random_s) {
      r_rand = std::max(r_rand,
                        weyl_residual(sc.law, sc.h, degenerate_potential(checked, sc.law, s), sc.helicity, ev, step));
    }

    const AngleSample a = sc.law.sample(ev.t);
    const Vec3 v = velocity(a, sc.helicity);
    speed = std::max(speed, std::abs(v.norm() - 1.0));

    const Spinor psi = build_spinor(a, sc.h.value(ev, a), sc.helicity);
    Vec3 kappa_spinor;
    for (int i = 1; i <= 3; ++i) kappa_spinor[i - 1] = -expectation(psi, sig[i]).real() / psi.norm_squared();
    kappa = std::max(kappa, (kappa_spinor + v).norm());

    const double sv = sc.s.value(ev, a);
    const KineticMomentum m = kinetic_momentum(a, sv, sc.helicity);
    const double k = localization_k(a).k;
    shell = std::max(shell, std::abs(mass_shell_defect(a, sv, sc.helicity) + k * k));
    cross = std::max(cross, std::abs(momentum_noncollinearity(a, sv, sc.helicity) - k));
    dot = std::max(dot, std::abs(m.momentum().dot(v) - m.energy()));

    const EMField closed = drive_field_closed_form(a, sc.helicity, q);
    const EMField numeric = field_from_potential_numeric(base, q, ev, step);
    drive_err = std::max(drive_err, (closed.E - numeric.E).norm());
    drive_b = std::max(drive_b, numeric.B.norm());

    const EMField gauge_closed = gauge_family_field(sc.law, sc.s, q, ev);
    const EMField gauge_numeric = field_from_potential_numeric(gauge_only, q, ev, step);
    gauge_err = std::max(gauge_err, std::max((gauge_closed.E - gauge_numeric.E).norm(),
                                             (gauge_closed.B - gauge_numeric.B).norm()));
  }

  report.note("helicity", std::string(to_string(sc.helicity)));
  report.note("events", std::to_string(events.size()));
  report.note("fd_step", step);
  report.require_at_most("weyl_residual_base", r_base, sc.tolerance);
  report.require_at_most("weyl_residual_degenerate_s", r_deg, sc.tolerance);
  report.require_at_most("weyl_residual_random_s", r_rand, sc.tolerance);
  report.require_at_most("unit_speed", speed, 1e-12);
  report.require_at_most("kappa_plus_velocity", kappa, 1e-14);
  report.require_at_most("mass_shell_plus_k2", shell, 1e-12);
  report.require_at_most("p_cross_v_minus_k", cross, 1e-12);
  report.require_at_most("p_dot_v_minus_E0", dot, 1e-12);
  report.require_at_most("drive_field_closed_vs_numeric", drive_err, field_tol);
  report.require_at_most("drive_field_B", drive_b, field_tol);
  report.require_at_most("gauge_field_closed_vs_numeric", gauge_err, field_tol);
  return report;
}

// ---------------------------------------------------------------------------
// simulate / figures
// ---------------------------------------------------------------------------

struct SimulateOutcome {
  Trajectory trajectory;
  std::optional<ScenarioSummary> summary;
  RunReport report;
};

inline void add_si_info(RunReport& report, double max_field, double q) {
  const SiRates r = si_rates(max_field, q);
  report.note("si_max_field_V_per_m", max_field);
  report.note("si_rate_eV_per_meter", r.eV_per_meter);
  report.note("si_rate_eV_per_second", r.eV_per_second);
}

/// Integrates the scenario. Writes the CSV (possibly partial when the field
/// leaves the solution family) to `csv` when given.
inline SimulateOutcome cmd_simulate(const Scenario& sc, std::ostream* csv, bool si = false) {
  SimulateOutcome out;
  out.report.scenario = sc.name;
  out.report.seed = sc.seed;
  out.report.note("preset", std::string(to_string(sc.preset)));
  try {
    ScenarioRun run = run_scenario(sc);
    out.trajectory = std::move(run.trajectory);
    out.summary = run.summary;
  } catch (const ConstraintViolation& e) {
    out.trajectory = e.partial();
    if (csv) write_trajectory_csv(*csv, out.trajectory, sc.columns);
    out.report.note("aborted", e.what());
    out.report.require_at_most("constraint_residual", e.residual(), sc.constraint_tolerance);
    return out;
  }
  if (csv) write_trajectory_csv(*csv, out.trajectory, sc.columns);

  const ScenarioSummary& sum = *out.summary;
  out.report.note("samples", std::to_string(out.trajectory.samples.size()));
  out.report.note("dt", out.trajectory.dt);
  out.report.note("k_min", sum.k_min);
  out.report.note("t_k_min", sum.t_k_min);
  out.report.note("k_max", sum.k_max);
  out.report.note("t_k_max", sum.t_k_max);
  out.report.note("endpoint", format_report_number(sum.endpoint.x()) + " " +
                                  format_report_number(sum.endpoint.y()) + " " +
                                  format_report_number(sum.endpoint.z()));
  out.report.note("max_distance_from_start", sum.max_distance_from_start);
  if (sum.k_zero_time) out.report.note("k_zero_time", *sum.k_zero_time);
  if (sum.k_recovery_time) out.report.note("k_recovery_time", *sum.k_recovery_time);
  if (si) {
    double max_field = 0.0;
    for (const auto& s : out.trajectory.samples) max_field = std::max(max_field, s.field.norm());
    add_si_info(out.report, max_field, sc.q);
  }
  out.report.require_at_most("unit_speed_drift", sum.max_speed_deviation, 1e-10);
  out.report.require_at_most("constraint_residual", sum.max_constraint_residual, sc.constraint_tolerance);
  return out;
}

/// Writes <prefix>_velocity.csv, <prefix>_trajectory.csv and <prefix>_k.csv.
inline SimulateOutcome cmd_figures(const Scenario& sc, const std::string& prefix, bool si = false) {
  SimulateOutcome out = cmd_simulate(sc, nullptr, si);
  const std::vector<std::pair<std::string, std::vector<std::string>>> figures{
      {"_velocity.csv", {"t", "vx", "vy", "vz"}},
      {"_trajectory.csv", {"t", "x", "y", "z"}},
      {"_k.csv", {"t", "k"}},
  };
  for (const auto& [suffix, cols] : figures) {
    const std::string path = prefix + suffix;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write '" + path + "'");
    write_trajectory_csv(f, out.trajectory, cols);
    out.report.note("wrote", path);
  }
  return out;
}

// ---------------------------------------------------------------------------
// control
// ---------------------------------------------------------------------------

struct ControlRow {
  double t = 0.0;
  Vec3 E = Vec3::Zero();
  double target = 0.0;
  double achieved = 0.0;
};

struct ControlOutcome {
  std::vector<ControlRow> rows;
  RunReport report;
};

inline void write_control_csv(std::ostream& os, const std::vector<ControlRow>& rows) {
  os << "t,Ex,Ey,Ez,target,achieved\n";
  for (const ControlRow& r : rows) {
    os << format_csv_number(r.t) << "," << format_csv_number(r.E.x()) << "," << format_csv_number(r.E.y()) << ","
       << format_csv_number(r.E.z()) << "," << format_csv_number(r.target) << "," << format_csv_number(r.achieved)
       << "\n";
  }
  os.flush();
}

/// dk/dt from the state and its angular accelerations.
inline double k_rate(const AngleSample& a) {
  const double k = localization_k(a).k;
  const double st = std::sin(a.theta), ct = std::cos(a.theta);
  const double d_k2 = 0.5 * (st * ct * a.theta_dot * a.phi_dot * a.phi_dot + st * st * a.phi_dot * a.phi_ddot +
                             a.theta_dot * a.theta_ddot);
  return d_k2 / (2.0 * k);
}

namespace detail {

inline ControlOutcome control_localization(const Scenario& sc, const Expr& rate) {
  ControlOutcome out;
  const ChargeSpec q = sc.charge();
  KControlMode mode;
  double direction = 1.0;
  if (sc.control == ControlMode::Azimuthal) {
    const LinearLaw* th = sc.law.theta.linear_law();
    if (!th || th->rate != 0.0) throw DomainError("azimuthal control needs a constant theta (omega1 = 0)");
    mode = AzimuthalControl{th->offset};
    if (sc.law.phi.rate(0.0) < 0.0) direction = -1.0;
  } else {
    const LinearLaw* ph = sc.law.phi.linear_law();
    if (!ph || ph->rate != 0.0) throw DomainError("polar control needs a constant phi (omega2 = 0)");
    mode = PolarControl{ph->offset};
    if (sc.law.theta.rate(0.0) < 0.0) direction = -1.0;
  }
  // The field is linear in dk/dt; k = |angular rate| / 2 flips the sign for negative rates.
  const Vec3 per_unit_rate = k_control_field(direction, mode, sc.helicity, q).E;
  std::array<Expr, 3> E;
  for (std::size_t i = 0; i < 3; ++i) {
    E[i] = detail::mul(Expr::constant(per_unit_rate[static_cast<int>(i)]), rate);
  }
  const FieldProgram program = FieldProgram::expressions(E);

  IntegrationOptions opts{sc.constraint_tolerance, GaugeScalar::zero()};
  Trajectory traj;
  try {
    traj = integrate_trajectory(initial_state(sc), program, sc.t_end, sc.dt, opts);
  } catch (const ConstraintViolation& e) {
    out.report.note("aborted", e.what());
    out.report.require_at_most("constraint_residual", e.residual(), sc.constraint_tolerance);
    traj = e.partial();
  }

  double worst = 0.0;
  for (const TrajectorySample& s : traj.samples) {
    const Bindings b = Bindings{}.set(Var::t, s.t);
    ControlRow row;
    row.t = s.t;
    for (int i = 0; i < 3; ++i) row.E[i] = E[static_cast<std::size_t>(i)].eval(b);
    row.target = rate.eval(b);
    const ParticleState st = TrajectoryIntegrator::state_of(s, sc.helicity, sc.q);
    const AngularAcceleration acc = accel_from_field(st, row.E);
    const AngleSample a = st.angles(acc.theta_ddot, acc.phi_ddot);
    if (localization_k(a).k > 1e-9) {
      row.achieved = k_rate(a);
      worst = std::max(worst, std::abs(row.achieved - row.target));
    } else {
      row.achieved = std::numeric_limits<double>::quiet_NaN();
    }
    out.rows.push_back(row);
  }
  out.report.require_at_most("dk_dt_achieved_vs_target", worst, 1e-6);
  return out;
}

inline ControlOutcome control_energy(const Scenario& sc, const Expr& rate) {
  ControlOutcome out;
  const ChargeSpec q = sc.charge();
  if (sc.s.depends_on_space()) throw ScenarioError("energy control needs s to depend on time only", "s");
  auto applied = [&](double t) { return energy_control_field(rate.eval(Bindings{}.set(Var::t, t)), sc.law, q, t).E; };
  // Gauge channel: the field is the gauge-family field of s, so ds/dt = -q E.v.
  auto s_rate = [&](double t) { return -q.value() * applied(t).dot(velocity(sc.law, sc.helicity, t)); };

  const double steps = std::ceil(sc.t_end / sc.dt - 1e-9);
  const auto n = static_cast<long long>(steps);
  double s = sc.s.value(Event{0, 0, 0, 0}, sc.law);
  double worst_rate = 0.0, worst_field = 0.0;
  for (long long i = 0;; ++i) {
    const double t = sc.t_end * static_cast<double>(i) / static_cast<double>(n);
    const AngleSample a = sc.law.sample(t);
    ControlRow row;
    row.t = t;
    row.E = applied(t);
    row.target = rate.eval(Bindings{}.set(Var::t, t));
    const double ds = s_rate(t);
    row.achieved = energy_rate(a, ds, sc.helicity);
    worst_rate = std::max(worst_rate, std::abs(row.achieved - row.target));
    const Vec3 realized = gauge_family_field(a, s, FourGradient{ds, 0.0, 0.0, 0.0}, q).E +
                          drive_field_closed_form(a, sc.helicity, q).E;
    worst_field = std::max(worst_field, (realized - row.E).norm());
    out.rows.push_back(row);
    if (i == n) break;
    const double h = sc.t_end * static_cast<double>(i + 1) / static_cast<double>(n) - t;
    const double k1 = s_rate(t), k2 = s_rate(t + 0.5 * h), k4 = s_rate(t + h);
    s += h / 6.0 * (k1 + 4.0 * k2 + k4);
  }
  out.report.require_at_most("dE_dt_achieved_vs_target", worst_rate, 1e-6);
  out.report.require_at_most("field_matches_gauge_family", worst_field, 1e-6);
  return out;
}

}  // namespace detail

/// Plans the field that realizes the scenario's dE/dt or dk/dt schedule and
/// validates it by forward simulation.
inline ControlOutcome cmd_control(const Scenario& sc, std::ostream* csv = nullptr, bool si = false) {
  if (sc.control == ControlMode::None) throw ScenarioError("control needs control.mode", "control.mode");
  const Expr rate = parse_expr(sc.control_rate_text, sc.expression_params());
  ControlOutcome out = sc.control == ControlMode::Energy ? detail::control_energy(sc, rate)
                                                         : detail::control_localization(sc, rate);
  out.report.scenario = sc.name;
  out.report.seed = sc.seed;
  out.report.note("control.rate", sc.control_rate_text);
  if (si) {
    double max_field = 0.0;
    for (const ControlRow& r : out.rows) max_field = std::max(max_field, r.E.norm());
    add_si_info(out.report, max_field, sc.q);
  }
  if (csv) write_control_csv(*csv, out.rows);
  return out;
}

}  // namespace weyl
