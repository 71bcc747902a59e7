#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "finsler/metric_spec.hpp"
#include "finsler/torsion.hpp"

namespace finsler {

struct SuiteCheck {
  std::string group;
  std::string name;
  double value = 0;
  double tolerance = 0;
  std::string relation = "<";  // value < tol, value <= tol, or value > tol
  int samples = 0;
  bool passed = false;
};

struct SuiteOptions {
  SampleSpec samples;                  // points for the pointwise identities
  int draws = 20;                      // random H, K per point
  std::optional<double> curvature_c;   // constant holomorphic curvature 2c, if known
  int geodesic_starts = 3;
  double solver_tol = 1e-9;
  bool geodesics = true;
  bool variations = true;
  std::map<std::string, double> tolerances;  // overrides by check name
};

struct SuiteReport {
  std::vector<SuiteCheck> checks;
  std::vector<ExcludedSample> excluded;
  KahlerReport kahler;
  double seconds = 0;

  bool passed() const;
  json to_json() const;
};

/// Known constant for the built-in families: 0 for flat metrics, -2 for the ball.
std::optional<double> known_curvature_constant(const FinslerMetric& m);

/// Every invariant that applies to the metric; Kahler-gated identities run only where the
/// classification says they hold.
SuiteReport run_verify_suite(const FinslerMetric& m, const SuiteOptions& opts);

}  // namespace finsler
