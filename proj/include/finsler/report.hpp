#pragma once

#include <string>

#include "finsler/geodesics.hpp"
#include "finsler/metric_spec.hpp"

namespace finsler {

inline constexpr int kReportSchema = 1;
inline constexpr const char* kVersion = "1.0.0";

json matrix_to_json(const CMatrix& m);
json tensor_to_json(const Tensor& t);
json residuals_to_json(const ResidualSet& r);

/// {"schema": 1, "command": ..., "config": ..., "result": ..., "metadata": {...}}.
/// Everything outside "metadata" is a function of the inputs only.
json make_report(const std::string& command, const json& config, json result, bool timestamp = true);

json path_to_json(const GeodesicPath& path);
/// Columns t, Re/Im sigma^a, Re/Im sigma'^a, F.
std::string path_to_csv(const GeodesicPath& path);

}  // namespace finsler
