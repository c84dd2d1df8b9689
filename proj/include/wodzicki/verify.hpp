#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "wodzicki/torus_element.hpp"

namespace wodzicki {

/// One comparison inside a suite. `error` is relative when `relative` is
/// set, else absolute; the check passes iff error <= tol.
struct CheckResult {
  std::string name;
  Complex measured;
  Complex expected;
  double error = 0.0;
  double tol = 0.0;
  bool relative = true;
  bool pass = false;
  std::string note;
};

struct SuiteResult {
  std::string suite;
  int criterion = 0;
  std::vector<CheckResult> checks;
  double seconds = 0.0;
  /// Set when the suite aborted with an exception; the suite fails.
  std::string error;

  bool pass() const;
};

/// Suite names in acceptance-criterion order.
const std::vector<std::string>& suite_names();

/// Runs one suite; independent groups of checks run through parallel_for and
/// are reported in a fixed order. Throws ConfigurationError for an unknown
/// name. Honours WODZICKI_INJECT_FAULT=moments.
SuiteResult run_suite(const std::string& name);

nlohmann::json suite_to_json(const SuiteResult& r);

/// Fixed-width table, one line per check.
std::string format_suite(const SuiteResult& r);

}  // namespace wodzicki
