#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "finsler/metric.hpp"
#include "finsler/sampling.hpp"
#include "json.hpp"

namespace finsler {

using json = nlohmann::ordered_json;

/// {"builtin": {"name": ..., "n": k, "params": {...}}} or {"dsl": {"n": k, "expr": "..."}}
struct MetricSpec {
  bool is_dsl = false;
  BuiltinSpec builtin;
  std::string expr;
  int n = 1;
  bool jets_only = false;  // drop the analytic provider

  FinslerMetric build() const;
  std::string label() const;
  json to_json() const;
  static MetricSpec from_json(const json& j);
};

/// Where sample points come from: explicit list, seeded random draw, or deterministic grid.
struct SampleSpec {
  std::string mode = "random";  // random | grid | points
  int count = 20;
  uint64_t seed = kDefaultSeed;
  double radius = 0.8;
  int grid = 10;
  std::vector<FinslerPoint> points;

  std::vector<FinslerPoint> generate(int n) const;
  json to_json() const;
  static SampleSpec from_json(const json& j);
};

struct RunConfig {
  MetricSpec metric;
  SampleSpec samples;
  std::map<std::string, double> tolerances;
  std::string format = "json";  // json | csv
  std::string output;           // empty: standard output

  double tolerance(const std::string& name, double fallback) const;
  json to_json() const;
  static RunConfig from_json(const json& j);
  static RunConfig load(const std::string& path);
};

/// "1", "-2.5", "3i", "1+2i", "0.5-i"
cplx parse_complex(const std::string& s);
/// Comma-separated complex list, e.g. "0.5, 1+2i".
CVector parse_complex_vector(const std::string& s);

json complex_to_json(cplx c);
cplx complex_from_json(const json& j);
json vector_to_json(const CVector& v);
CVector vector_from_json(const json& j);
json point_to_json(const FinslerPoint& p);
FinslerPoint point_from_json(const json& j);

}  // namespace finsler
