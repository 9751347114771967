#pragma once

// Scenario files: flat `key = value` text, one entry per line, `#` comments.
// Numeric values may be closed expressions ("pi/2", "sqrt(3)", "1/(2*q)").
// See docs/scenario_format.md for the key reference.

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "weyl/angle_law.hpp"
#include "weyl/error.hpp"
#include "weyl/expr.hpp"
#include "weyl/scalar_field.hpp"
#include "weyl/types.hpp"

namespace weyl {

enum class Preset { Custom, Fig1Velocity, Fig2Trajectory, Fig3K, Fig45Control };

inline constexpr std::string_view to_string(Preset p) {
  switch (p) {
    case Preset::Custom: return "custom";
    case Preset::Fig1Velocity: return "fig1_velocity";
    case Preset::Fig2Trajectory: return "fig2_trajectory";
    case Preset::Fig3K: return "fig3_k";
    case Preset::Fig45Control: return "fig45_control";
  }
  return "?";
}

enum class FieldKind { None, Drive, Expression };
enum class ControlMode { None, Energy, Azimuthal, Polar };

/// The canonical CSV column order of `simulate`.
inline const std::vector<std::string>& trajectory_columns() {
  static const std::vector<std::string> cols{"t",  "x",  "y",  "z",  "vx", "vy", "vz", "theta", "phi",
                                             "k",  "E0", "px", "py", "pz", "Ex", "Ey", "Ez",
                                             "constraint_residual"};
  return cols;
}

struct Scenario {
  std::string name = "scenario";
  Preset preset = Preset::Custom;
  Helicity helicity = Helicity::Positive;
  double q = 1.0;
  Parameters params;

  AngleLaw law;
  std::string theta_text;
  std::string phi_text;

  PhaseField h;
  std::string h_text = "0";
  GaugeScalar s;
  std::string s_text = "0";

  FieldKind field = FieldKind::None;
  std::array<std::string, 3> field_E_text{"0", "0", "0"};
  std::array<std::string, 3> field_B_text{"0", "0", "0"};
  bool paper_literal_field = false;

  Vec3 start = Vec3::Zero();
  double dt = 1e-3;
  double t_end = 10.0;

  double fd_step = 1e-5;
  double tolerance = 1e-6;
  double constraint_tolerance = 1e-6;
  int sample_count = 100;
  std::uint64_t seed = 1;
  double potential_offset = 0.0;

  std::string csv_path;
  std::vector<std::string> columns = trajectory_columns();

  ControlMode control = ControlMode::None;
  std::string control_rate_text = "0";

  ChargeSpec charge() const { return ChargeSpec(q); }

  /// Parameters visible to expressions: user parameters plus q.
  Parameters expression_params() const {
    Parameters p = params;
    p["q"] = q;
    return p;
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

struct RawEntry {
  std::string value;
  std::size_t line;
};

inline const std::vector<std::string_view>& scenario_keys() {
  static const std::vector<std::string_view> keys{
      "name",    "preset",   "helicity",   "q",       "theta0",     "omega1",     "phi0",       "omega2",
      "theta_law", "phi_law", "h",          "E0",      "s",          "field",      "field.Ex",   "field.Ey",
      "field.Ez", "field.Bx", "field.By",   "field.Bz", "x0",         "y0",         "z0",         "dt",
      "t_end",   "fd_step",  "tolerance",  "constraint_tolerance",   "sample_count", "seed",     "csv",
      "columns", "control.mode", "control.rate", "verify.potential_offset"};
  return keys;
}

class ScenarioBuilder {
 public:
  explicit ScenarioBuilder(std::map<std::string, RawEntry> entries) : entries_(std::move(entries)) {}

  Scenario build() {
    Scenario sc;
    for (const auto& [key, e] : entries_) {
      if (key.rfind("param.", 0) == 0) {
        const std::string pname = key.substr(6);
        if (pname.empty()) throw ScenarioError("empty parameter name", key, e.line);
        sc.params[pname] = number(key, sc.params);
      } else if (std::find(scenario_keys().begin(), scenario_keys().end(), key) == scenario_keys().end()) {
        throw ScenarioError("unknown key '" + key + "' (line " + std::to_string(e.line) + ")", key, e.line);
      }
    }

    if (auto v = text("name")) sc.name = *v;
    if (auto v = text("preset")) sc.preset = preset(*v);

    auto hel = text("helicity");
    if (!hel) throw ScenarioError("missing required key 'helicity'", "helicity");
    if (*hel == "positive" || *hel == "+") {
      sc.helicity = Helicity::Positive;
    } else if (*hel == "negative" || *hel == "-") {
      sc.helicity = Helicity::Negative;
    } else {
      throw ScenarioError("helicity must be 'positive' or 'negative'", "helicity", line("helicity"));
    }

    if (!has("q")) throw ScenarioError("missing required key 'q'", "q");
    sc.q = number("q", sc.params);
    if (sc.q == 0.0 || !std::isfinite(sc.q)) throw ScenarioError("q must be finite and non-zero", "q", line("q"));

    const Parameters p = sc.expression_params();
    sc.law.theta = time_law("theta_law", "theta0", "omega1", p, sc.theta_text);
    sc.law.phi = time_law("phi_law", "phi0", "omega2", p, sc.phi_text);

    const double e0 = has("E0") ? number("E0", p) : 1.0;
    if (auto v = text("h")) {
      sc.h_text = *v;
      sc.h = *v == "plane_wave" ? PhaseField::plane_wave(e0) : scalar("h", p);
    }
    if (auto v = text("s")) {
      sc.s_text = *v;
      sc.s = scalar("s", p);
    }

    if (auto v = text("field")) {
      if (*v == "none") {
        sc.field = FieldKind::None;
      } else if (*v == "drive") {
        sc.field = FieldKind::Drive;
      } else if (*v == "expr") {
        sc.field = FieldKind::Expression;
      } else {
        throw ScenarioError("field must be one of none, drive, expr", "field", line("field"));
      }
    }
    constexpr std::array<const char*, 3> e_keys{"field.Ex", "field.Ey", "field.Ez"};
    constexpr std::array<const char*, 3> b_keys{"field.Bx", "field.By", "field.Bz"};
    for (std::size_t i = 0; i < 3; ++i) {
      for (auto [keys, out] : {std::pair{&e_keys, &sc.field_E_text}, std::pair{&b_keys, &sc.field_B_text}}) {
        const char* key = (*keys)[i];
        if (auto v = text(key)) {
          if (sc.field != FieldKind::Expression) {
            throw ScenarioError(std::string(key) + " requires field = expr", key, line(key));
          }
          time_expr(key, p);
          (*out)[i] = *v;
        }
      }
    }

    sc.start = Vec3(opt_number("x0", p, 0.0), opt_number("y0", p, 0.0), opt_number("z0", p, 0.0));
    sc.dt = opt_number("dt", p, sc.dt);
    if (!(sc.dt > 0.0)) throw ScenarioError("dt must be positive", "dt", line("dt"));
    sc.t_end = opt_number("t_end", p, sc.t_end);
    if (!(sc.t_end > 0.0)) throw ScenarioError("t_end must be positive", "t_end", line("t_end"));
    sc.fd_step = opt_number("fd_step", p, sc.fd_step);
    if (!(sc.fd_step > 0.0)) throw ScenarioError("fd_step must be positive", "fd_step", line("fd_step"));
    sc.tolerance = opt_number("tolerance", p, sc.tolerance);
    if (!(sc.tolerance > 0.0)) throw ScenarioError("tolerance must be positive", "tolerance", line("tolerance"));
    sc.constraint_tolerance = opt_number("constraint_tolerance", p, sc.constraint_tolerance);
    if (!(sc.constraint_tolerance > 0.0)) {
      throw ScenarioError("constraint_tolerance must be positive", "constraint_tolerance",
                          line("constraint_tolerance"));
    }
    if (has("sample_count")) {
      const double n = number("sample_count", p);
      if (!(n >= 1.0) || n != std::floor(n) || n > 1e7) {
        throw ScenarioError("sample_count must be a positive integer", "sample_count", line("sample_count"));
      }
      sc.sample_count = static_cast<int>(n);
    }
    if (auto v = text("seed")) sc.seed = parse_seed(*v);
    sc.potential_offset = opt_number("verify.potential_offset", p, 0.0);

    if (auto v = text("csv")) sc.csv_path = *v;
    if (auto v = text("columns")) sc.columns = columns(*v);

    if (auto v = text("control.mode")) {
      if (*v == "energy") {
        sc.control = ControlMode::Energy;
      } else if (*v == "azimuthal") {
        sc.control = ControlMode::Azimuthal;
      } else if (*v == "polar") {
        sc.control = ControlMode::Polar;
      } else if (*v == "none") {
        sc.control = ControlMode::None;
      } else {
        throw ScenarioError("control.mode must be energy, azimuthal or polar", "control.mode", line("control.mode"));
      }
    }
    if (auto v = text("control.rate")) {
      time_expr("control.rate", p);
      sc.control_rate_text = *v;
    }
    return sc;
  }

 private:
  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  std::size_t line(const std::string& key) const { return has(key) ? entries_.at(key).line : 0; }

  std::optional<std::string> text(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return entries_.at(key).value;
  }

  ScenarioError invalid(const std::string& key, const std::string& why) const {
    return ScenarioError("invalid value for '" + key + "' (line " + std::to_string(line(key)) + "): " + why, key,
                         line(key));
  }

  Expr expr(const std::string& key, const Parameters& p) const {
    try {
      return parse_expr(entries_.at(key).value, p);
    } catch (const ParseError& e) {
      throw invalid(key, e.what());
    }
  }

  double number(const std::string& key, const Parameters& p) const {
    const Expr e = expr(key, p);
    if (!e.is_closed()) throw invalid(key, "expected a constant expression");
    try {
      const double v = e.eval({});
      if (!std::isfinite(v)) throw invalid(key, "value is not finite");
      return v;
    } catch (const EvalError& err) {
      throw invalid(key, err.what());
    }
  }

  double opt_number(const std::string& key, const Parameters& p, double fallback) const {
    return has(key) ? number(key, p) : fallback;
  }

  Expr time_expr(const std::string& key, const Parameters& p) const {
    const Expr e = expr(key, p);
    for (Var v : {Var::x, Var::y, Var::z, Var::theta, Var::phi}) {
      if (e.depends_on(v)) throw invalid(key, "may only depend on t");
    }
    return e;
  }

  ScalarField scalar(const std::string& key, const Parameters& p) const { return ScalarField(expr(key, p)); }

  TimeLaw time_law(const std::string& law_key, const std::string& offset_key, const std::string& rate_key,
                   const Parameters& p, std::string& description) const {
    if (has(law_key)) {
      if (has(offset_key) || has(rate_key)) {
        throw invalid(law_key, "cannot be combined with " + offset_key + "/" + rate_key);
      }
      description = entries_.at(law_key).value;
      return TimeLaw::custom(time_expr(law_key, p));
    }
    const double offset = opt_number(offset_key, p, 0.0);
    const double rate = opt_number(rate_key, p, 0.0);
    TimeLaw law = TimeLaw::linear(offset, rate);
    description = law.describe();
    return law;
  }

  Preset preset(const std::string& v) const {
    for (Preset p : {Preset::Custom, Preset::Fig1Velocity, Preset::Fig2Trajectory, Preset::Fig3K,
                     Preset::Fig45Control}) {
      if (v == to_string(p)) return p;
    }
    throw invalid("preset", "unknown preset '" + v + "'");
  }

  std::uint64_t parse_seed(const std::string& v) const {
    std::uint64_t seed = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), seed);
    if (ec != std::errc() || ptr != v.data() + v.size()) throw invalid("seed", "expected an unsigned integer");
    return seed;
  }

  std::vector<std::string> columns(const std::string& v) const {
    if (v == "all") return trajectory_columns();
    std::vector<bool> wanted(trajectory_columns().size(), false);
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      auto it = std::find(trajectory_columns().begin(), trajectory_columns().end(), item);
      if (it == trajectory_columns().end()) throw invalid("columns", "unknown column '" + item + "'");
      wanted[static_cast<std::size_t>(it - trajectory_columns().begin())] = true;
    }
    std::vector<std::string> out;
    for (std::size_t i = 0; i < wanted.size(); ++i) {
      if (wanted[i]) out.push_back(trajectory_columns()[i]);
    }
    if (out.empty()) throw invalid("columns", "no columns selected");
    return out;
  }

  std::map<std::string, RawEntry> entries_;
};

}  // namespace detail

/// Parses scenario text. `origin` names the source in error messages.
inline Scenario parse_scenario(std::string_view text, const std::string& origin = "<scenario>") {
  std::map<std::string, detail::RawEntry> entries;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string line(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ScenarioError(origin + ":" + std::to_string(line_no) + ": expected 'key = value'", {}, line_no);
    }
    std::string key = detail::trim(line.substr(0, eq));
    std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw ScenarioError(origin + ":" + std::to_string(line_no) + ": empty key", {}, line_no);
    if (value.empty()) {
      throw ScenarioError(origin + ":" + std::to_string(line_no) + ": empty value for '" + key + "'", key, line_no);
    }
    if (entries.count(key)) {
      throw ScenarioError(origin + ":" + std::to_string(line_no) + ": duplicate key '" + key + "'", key, line_no);
    }
    entries.emplace(std::move(key), detail::RawEntry{std::move(value), line_no});
    if (end == text.size()) break;
  }
  return detail::ScenarioBuilder(std::move(entries)).build();
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError("cannot open scenario file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str(), path);
}

}  // namespace weyl
