#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace weyl {

/// Locale-independent number text with up to 17 significant digits.
/// Negative zero is written as 0.
inline std::string format_csv_number(double v) {
  if (v == 0.0) v = 0.0;
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
  (void)ec;
  return std::string(buf.data(), end);
}

/// Shortest text that reads back to the same double; used in reports.
inline std::string format_report_number(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  (void)ec;
  return std::string(buf.data(), end);
}

struct Check {
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  /// "<=" when measured must not exceed tolerance, ">=" when it must reach it.
  std::string relation = "<=";
};

struct RunReport {
  std::string scenario;
  std::uint64_t seed = 0;
  std::vector<Check> checks;
  std::vector<std::pair<std::string, std::string>> info;

  /// Passes when measured <= tolerance (NaN fails).
  Check& require_at_most(std::string name, double measured, double tolerance) {
    checks.push_back({std::move(name), measured, tolerance, measured <= tolerance, "<="});
    return checks.back();
  }

  /// Passes when measured >= threshold (NaN fails).
  Check& require_at_least(std::string name, double measured, double threshold) {
    checks.push_back({std::move(name), measured, threshold, measured >= threshold, ">="});
    return checks.back();
  }

  void note(std::string key, std::string value) { info.emplace_back(std::move(key), std::move(value)); }
  void note(std::string key, double value) { note(std::move(key), format_report_number(value)); }

  bool passed() const {
    for (const Check& c : checks) {
      if (!c.passed) return false;
    }
    return true;
  }

  void print(std::ostream& os) const {
    os << "scenario: " << scenario << "\n";
    os << "seed: " << seed << "\n";
    for (const auto& [k, v] : info) os << k << ": " << v << "\n";
    for (const Check& c : checks) {
      os << (c.passed ? "PASS " : "FAIL ") << c.name << "  measured=" << format_report_number(c.measured) << " "
         << c.relation << " " << format_report_number(c.tolerance) << "\n";
    }
    os << "overall: " << (passed() ? "PASS" : "FAIL") << "\n";
  }
};

}  // namespace weyl
