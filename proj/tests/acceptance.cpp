// One line per acceptance criterion; exit status 0 iff every criterion passes.
// Failing suites also print their check table to stderr.

#include <cstdio>
#include <iostream>

#include "wodzicki/verify.hpp"

int main() {
  using namespace wodzicki;
  int failed = 0;
  for (const auto& name : suite_names()) {
    const SuiteResult r = run_suite(name);
    double worst = 0.0;
    for (const auto& c : r.checks) worst = std::max(worst, c.tol > 0 ? c.error / c.tol : c.error);
    std::printf("%s  %2d %-24s %3zu checks  worst err/tol %.2e  %6.1f s\n",
                r.pass() ? "PASS" : "FAIL", r.criterion, name.c_str(), r.checks.size(), worst,
                r.seconds);
    std::fflush(stdout);
    if (!r.pass()) {
      ++failed;
      std::cerr << format_suite(r);
    }
  }
  return failed == 0 ? 0 : 1;
}
