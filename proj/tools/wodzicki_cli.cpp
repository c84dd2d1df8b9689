#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "wodzicki/config.hpp"
#include "wodzicki/errors.hpp"
#include "wodzicki/verify.hpp"

using namespace wodzicki;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailedChecks = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

int run_compute_command(const std::string& path, int depth, double tol) {
  try {
    RunConfig config = load_run_config(path);
    if (depth > 0) config.options.depth = depth;
    if (tol > 0.0) config.options.inversion.tol = tol;
    std::cout << run_compute(config).dump(2) << "\n";
    return kExitOk;
  } catch (const InversionError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    std::cout << nlohmann::json{{"error", "inversion"}, {"message", e.what()}, {"residual", e.residual()}}
                     .dump(2)
              << "\n";
    return kExitNumerical;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const ConfigurationError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
  } catch (const ArgumentError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
  } catch (const PreconditionError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
  }
  return kExitConfig;
}

int run_verify_command(const std::string& which, bool as_json) {
  std::vector<std::string> names;
  if (which == "all") {
    names = suite_names();
  } else {
    bool known = false;
    for (const auto& s : suite_names()) known = known || s == which;
    if (!known) {
      std::cerr << "unknown suite '" << which << "'; available: all";
      for (const auto& s : suite_names()) std::cerr << ", " << s;
      std::cerr << "\n";
      return kExitConfig;
    }
    names.push_back(which);
  }
  bool all_pass = true;
  nlohmann::json out = nlohmann::json::array();
  for (const auto& name : names) {
    const SuiteResult r = run_suite(name);
    all_pass = all_pass && r.pass();
    if (as_json) {
      out.push_back(suite_to_json(r));
    } else {
      std::cout << format_suite(r) << std::flush;
    }
  }
  if (as_json) {
    std::cout << nlohmann::json{{"pass", all_pass}, {"suites", out}}.dump(2) << "\n";
  } else if (names.size() > 1) {
    std::cout << (all_pass ? "ALL PASS" : "SOME CHECKS FAILED") << "\n";
  }
  return all_pass ? kExitOk : kExitFailedChecks;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral functionals of (noncommutative) tori"};
  app.require_subcommand(1);

  std::string config_path;
  int depth = 0;
  double tol = 0.0;
  auto* compute = app.add_subcommand("compute", "Evaluate the functionals of a run configuration");
  compute->add_option("--config", config_path, "TOML or JSON run configuration")->required();
  compute->add_option("--depth", depth, "Override the symbol depth")->check(CLI::PositiveNumber);
  compute->add_option("--tol", tol, "Override the inversion tolerance")->check(CLI::PositiveNumber);

  std::string suite;
  bool as_json = false;
  auto* verify = app.add_subcommand("verify", "Run verification suites");
  verify->add_option("suite", suite, "Suite name or 'all'")->required();
  verify->add_flag("--json", as_json, "Machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (*compute) return run_compute_command(config_path, depth, tol);
  return run_verify_command(suite, as_json);
}
