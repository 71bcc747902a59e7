#include "finsler/report.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <sstream>

namespace finsler {

json matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

namespace {

json tensor_level(const Tensor& t, size_t offset, int depth) {
  json a = json::array();
  size_t stride = 1;
  for (int k = depth + 1; k < t.rank(); ++k) stride *= static_cast<size_t>(t.dim());
  for (int i = 0; i < t.dim(); ++i) {
    const size_t off = offset + static_cast<size_t>(i) * stride;
    a.push_back(depth + 1 == t.rank() ? complex_to_json(t.flat(off)) : tensor_level(t, off, depth + 1));
  }
  return a;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

json tensor_to_json(const Tensor& t) {
  if (t.rank() == 0) return json::array();
  return tensor_level(t, 0, 0);
}

json residuals_to_json(const ResidualSet& r) {
  json j = json::object();
  for (const auto& [k, v] : r.entries()) j[k] = v;
  return j;
}

json make_report(const std::string& command, const json& config, json result, bool timestamp) {
  json meta{{"version", kVersion}};
  if (timestamp) meta["generated"] = utc_timestamp();
  return {{"schema", kReportSchema},
          {"command", command},
          {"config", config},
          {"result", std::move(result)},
          {"metadata", meta}};
}

json path_to_json(const GeodesicPath& path) {
  json samples = json::array();
  for (size_t i = 0; i < path.times.size(); ++i) {
    samples.push_back({{"t", path.times[i]},
                       {"sigma", vector_to_json(path.states[i].sigma)},
                       {"velocity", vector_to_json(path.states[i].velocity)},
                       {"F", path.speed[i]}});
  }
  return {{"kind", path.kind},
          {"steps", path.steps},
          {"rejected", path.rejected},
          {"tol", path.tol},
          {"hit_boundary", path.hit_boundary},
          {"speed_drift", path.speed_drift()},
          {"samples", samples}};
}

std::string path_to_csv(const GeodesicPath& path) {
  std::ostringstream os;
  os.precision(17);
  const int n = path.states.empty() ? 0 : static_cast<int>(path.states[0].sigma.size());
  os << "t";
  for (int a = 1; a <= n; ++a) os << ",re_sigma" << a << ",im_sigma" << a;
  for (int a = 1; a <= n; ++a) os << ",re_dsigma" << a << ",im_dsigma" << a;
  os << ",F\n";
  for (size_t i = 0; i < path.times.size(); ++i) {
    os << path.times[i];
    for (int a = 0; a < n; ++a) os << ',' << path.states[i].sigma(a).real() << ',' << path.states[i].sigma(a).imag();
    for (int a = 0; a < n; ++a) {
      os << ',' << path.states[i].velocity(a).real() << ',' << path.states[i].velocity(a).imag();
    }
    os << ',' << path.speed[i] << '\n';
  }
  return os.str();
}

}  // namespace finsler
