#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wodzicki/metric.hpp"
#include "wodzicki/symbol.hpp"

namespace wodzicki {

enum class OperatorKind { FlatLaplacian, ConformalLaplacian, LaplaceType, FlatDirac, ConformalDirac };
enum class FunctionalKind { Metric, Einstein, MetricForm, EinsteinForm, Volume };

struct FunctionalSpec {
  FunctionalKind kind = FunctionalKind::Metric;
  std::string label;
  std::vector<TorusElement> V, W;
  /// Vector-field flavor name; empty picks the operator's natural one.
  std::string flavor;
  std::optional<TorusElement> localize;
  std::string ordering = "inner";
};

/// Validated run configuration. Every field carries its effective value, so
/// `describe()` lists the defaults that were applied.
struct RunConfig {
  DeformationPtr defm;
  CalculusOptions options;
  OperatorKind op = OperatorKind::FlatLaplacian;
  std::string variant;                 // conformal Laplacian: two-torus | four-torus
  std::optional<TorusElement> factor;  // conformal factor h, χ or k
  MetricData metric;                   // laplace-type only
  ConnectionData connection;           // laplace-type only
  std::vector<FunctionalSpec> functionals;

  nlohmann::json describe() const;
};

/// Accepts a TOML document or, when the text starts with '{', JSON. Throws
/// ConfigurationError with a readable message for anything invalid.
RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::string& path);

/// Evaluates every requested functional. The result holds the effective
/// configuration and one FunctionalReport per entry. Numerical failures
/// propagate as NumericalError.
nlohmann::json run_compute(const RunConfig& config);

}  // namespace wodzicki
