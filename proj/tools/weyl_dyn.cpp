// weyl-dyn: scenario-driven front end.
//
//   weyl-dyn verify|simulate|control|figures <scenario-file>
//            [--dt X] [--t-end X] [--seed N] [--paper-literal-field] [--si] [--out PATH]
//
// Exit status: 0 success, 1 a check failed, 2 usage or validation error.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "weyl/weyl.hpp"

namespace {

struct Options {
  std::string command;
  std::string scenario_path;
  std::optional<double> dt;
  std::optional<double> t_end;
  std::optional<std::uint64_t> seed;
  bool paper_literal_field = false;
  bool si = false;
  std::string out;
};

weyl::Scenario load(const Options& opt) {
  weyl::Scenario sc = weyl::load_scenario(opt.scenario_path);
  if (opt.dt) {
    if (!(*opt.dt > 0.0)) throw weyl::ScenarioError("--dt must be positive", "dt");
    sc.dt = *opt.dt;
  }
  if (opt.t_end) {
    if (!(*opt.t_end > 0.0)) throw weyl::ScenarioError("--t-end must be positive", "t_end");
    sc.t_end = *opt.t_end;
  }
  if (opt.seed) sc.seed = *opt.seed;
  sc.paper_literal_field = opt.paper_literal_field;
  return sc;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw weyl::Error("cannot write '" + path + "'");
  return f;
}

int finish(const weyl::RunReport& report, std::ostream& os) {
  report.print(os);
  return report.passed() ? 0 : 1;
}

int run(const Options& opt) {
  const weyl::Scenario sc = load(opt);

  if (opt.command == "verify") {
    const weyl::RunReport report = weyl::cmd_verify(sc);
    if (!opt.out.empty()) {
      std::ofstream f = open_output(opt.out);
      report.print(f);
    }
    return finish(report, std::cout);
  }

  if (opt.command == "simulate") {
    const std::string path = opt.out.empty() ? sc.csv_path : opt.out;
    if (path.empty()) {
      // CSV owns stdout; the report goes to stderr.
      const auto outcome = weyl::cmd_simulate(sc, &std::cout, opt.si);
      return finish(outcome.report, std::cerr);
    }
    std::ofstream f = open_output(path);
    auto outcome = weyl::cmd_simulate(sc, &f, opt.si);
    outcome.report.note("csv", path);
    return finish(outcome.report, std::cout);
  }

  if (opt.command == "control") {
    const std::string path = opt.out.empty() ? sc.csv_path : opt.out;
    if (path.empty()) {
      const auto outcome = weyl::cmd_control(sc, &std::cout, opt.si);
      return finish(outcome.report, std::cerr);
    }
    std::ofstream f = open_output(path);
    auto outcome = weyl::cmd_control(sc, &f, opt.si);
    outcome.report.note("csv", path);
    return finish(outcome.report, std::cout);
  }

  const std::string prefix = opt.out.empty() ? sc.name : opt.out;
  const auto outcome = weyl::cmd_figures(sc, prefix, opt.si);
  return finish(outcome.report, std::cout);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weyl particle dynamics: verify, simulate, control, figures"};
  Options opt;
  app.add_option("command", opt.command, "verify | simulate | control | figures")
      ->required()
      ->check(CLI::IsMember({"verify", "simulate", "control", "figures"}));
  app.add_option("scenario", opt.scenario_path, "scenario file")->required();
  app.add_option("--dt", opt.dt, "integration step (overrides the scenario)");
  app.add_option("--t-end", opt.t_end, "final time (overrides the scenario)");
  app.add_option("--seed", opt.seed, "random seed for verify");
  app.add_flag("--paper-literal-field", opt.paper_literal_field, "fig45_control: use Ez = 1/q");
  app.add_flag("--si", opt.si, "add SI energy rates to the report");
  app.add_option("--out", opt.out, "output path (CSV, report, or figure prefix)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    return run(opt);
  } catch (const weyl::Error& e) {
    std::cerr << "weyl-dyn: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "weyl-dyn: " << e.what() << "\n";
    return 2;
  }
}
