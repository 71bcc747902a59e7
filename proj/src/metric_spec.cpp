#include "finsler/metric_spec.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "finsler/dsl.hpp"
#include "finsler/errors.hpp"

namespace finsler {

FinslerMetric MetricSpec::build() const {
  FinslerMetric m = is_dsl ? dsl_metric(expr, n) : builtin_metric(builtin);
  return jets_only ? m.jets_only() : m;
}

std::string MetricSpec::label() const {
  if (is_dsl) return "dsl(" + std::to_string(n) + ")";
  std::string s = builtin.name + "(" + std::to_string(builtin.n);
  for (const auto& [k, v] : builtin.numbers) {
    std::ostringstream os;
    os << v;
    s += ", " + k + "=" + os.str();
  }
  return s + ")";
}

json MetricSpec::to_json() const {
  json j;
  if (is_dsl) {
    j["dsl"] = {{"n", n}, {"expr", expr}};
  } else {
    json params = json::object();
    for (const auto& [k, v] : builtin.numbers) params[k] = v;
    if (!builtin.matrix.empty()) params["g"] = builtin.matrix;
    j["builtin"] = {{"name", builtin.name}, {"n", builtin.n}, {"params", params}};
  }
  if (jets_only) j["jets_only"] = true;
  return j;
}

MetricSpec MetricSpec::from_json(const json& j) {
  MetricSpec s;
  try {
    if (j.contains("dsl")) {
      s.is_dsl = true;
      s.n = j.at("dsl").at("n").get<int>();
      s.expr = j.at("dsl").at("expr").get<std::string>();
    } else if (j.contains("builtin")) {
      const json& b = j.at("builtin");
      s.builtin.name = b.at("name").get<std::string>();
      s.builtin.n = b.value("n", 1);
      s.n = s.builtin.n;
      if (b.contains("params")) {
        for (const auto& [k, v] : b.at("params").items()) {
          if (k == "g") {
            s.builtin.matrix = v.get<std::vector<std::vector<std::string>>>();
          } else {
            s.builtin.numbers[k] = v.get<double>();
          }
        }
      }
    } else {
      fail(ErrorKind::invalid_argument, "metric spec needs a \"builtin\" or \"dsl\" entry");
    }
    s.jets_only = j.value("jets_only", false);
  } catch (const json::exception& e) {
    fail(ErrorKind::invalid_argument, std::string("malformed metric spec: ") + e.what());
  }
  return s;
}

std::vector<FinslerPoint> SampleSpec::generate(int n) const {
  if (mode == "random") return random_points(n, count, seed, radius);
  if (mode == "grid") return grid_points(n, grid, radius);
  if (mode == "points") {
    for (const FinslerPoint& p : points) {
      if (p.dim() != n) fail(ErrorKind::invalid_argument, "sample point has the wrong dimension");
    }
    return points;
  }
  fail(ErrorKind::invalid_argument, "unknown sample mode '" + mode + "' (random, grid, points)");
}

json SampleSpec::to_json() const {
  json j{{"mode", mode}, {"seed", seed}};
  if (mode == "random") {
    j["count"] = count;
    j["radius"] = radius;
  } else if (mode == "grid") {
    j["grid"] = grid;
    j["radius"] = radius;
  } else {
    json pts = json::array();
    for (const FinslerPoint& p : points) pts.push_back(point_to_json(p));
    j["points"] = pts;
  }
  return j;
}

SampleSpec SampleSpec::from_json(const json& j) {
  SampleSpec s;
  try {
    s.mode = j.value("mode", s.mode);
    s.count = j.value("count", s.count);
    s.seed = j.value("seed", s.seed);
    s.radius = j.value("radius", s.radius);
    s.grid = j.value("grid", s.grid);
    if (j.contains("points")) {
      for (const json& p : j.at("points")) s.points.push_back(point_from_json(p));
      if (!j.contains("mode")) s.mode = "points";
    }
  } catch (const json::exception& e) {
    fail(ErrorKind::invalid_argument, std::string("malformed sample spec: ") + e.what());
  }
  if (s.count < 1 || s.grid < 1) fail(ErrorKind::invalid_argument, "sample counts must be positive");
  return s;
}

double RunConfig::tolerance(const std::string& name, double fallback) const {
  auto it = tolerances.find(name);
  return it == tolerances.end() ? fallback : it->second;
}

json RunConfig::to_json() const {
  json tol = json::object();
  for (const auto& [k, v] : tolerances) tol[k] = v;
  return {{"metric", metric.to_json()}, {"samples", samples.to_json()}, {"tolerances", tol},
          {"format", format}, {"output", output}};
}

RunConfig RunConfig::from_json(const json& j) {
  RunConfig c;
  if (!j.contains("metric")) fail(ErrorKind::invalid_argument, "run config needs a \"metric\" entry");
  c.metric = MetricSpec::from_json(j.at("metric"));
  if (j.contains("samples")) c.samples = SampleSpec::from_json(j.at("samples"));
  try {
    if (j.contains("tolerances")) {
      for (const auto& [k, v] : j.at("tolerances").items()) c.tolerances[k] = v.get<double>();
    }
    c.format = j.value("format", c.format);
    c.output = j.value("output", c.output);
  } catch (const json::exception& e) {
    fail(ErrorKind::invalid_argument, std::string("malformed run config: ") + e.what());
  }
  for (const auto& [k, v] : c.tolerances) {
    if (!(v > 0)) fail(ErrorKind::invalid_argument, "tolerance '" + k + "' must be positive");
  }
  if (c.format != "json" && c.format != "csv") fail(ErrorKind::invalid_argument, "format must be json or csv");
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::invalid_argument, "cannot open config file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorKind::invalid_argument, "config file " + path + " is not valid JSON: " + e.what());
  }
  return from_json(j);
}

cplx parse_complex(const std::string& text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  }
  auto bad = [&]() -> cplx { fail(ErrorKind::invalid_argument, "cannot parse complex number '" + text + "'"); };
  if (s.empty()) bad();
  // split at the last sign that is not at the start and not part of an exponent
  size_t split = std::string::npos;
  for (size_t i = 1; i < s.size(); ++i) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') split = i;
  }
  auto number = [&](const std::string& t) {
    size_t used = 0;
    double x = 0;
    try {
      x = std::stod(t, &used);
    } catch (const std::exception&) {
      bad();
    }
    if (used != t.size()) bad();
    return x;
  };
  auto imag = [&](std::string t) {
    t.pop_back();
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return number(t);
  };
  const bool has_i = s.back() == 'i' || s.back() == 'j';
  if (!has_i) return {number(s), 0.0};
  if (split == std::string::npos) return {0.0, imag(s)};
  return {number(s.substr(0, split)), imag(s.substr(split))};
}

CVector parse_complex_vector(const std::string& s) {
  std::vector<cplx> xs;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) xs.push_back(parse_complex(item));
  if (xs.empty()) fail(ErrorKind::invalid_argument, "empty complex vector");
  CVector v(static_cast<int>(xs.size()));
  for (size_t i = 0; i < xs.size(); ++i) v(static_cast<int>(i)) = xs[i];
  return v;
}

json complex_to_json(cplx c) { return json::array({c.real(), c.imag()}); }

cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_string()) return parse_complex(j.get<std::string>());
  if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
  fail(ErrorKind::invalid_argument, "complex value must be a number, a string or [re, im]");
}

json vector_to_json(const CVector& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(complex_to_json(v(i)));
  return a;
}

CVector vector_from_json(const json& j) {
  if (j.is_string()) return parse_complex_vector(j.get<std::string>());
  if (!j.is_array() || j.empty()) fail(ErrorKind::invalid_argument, "complex vector must be a non-empty array");
  CVector v(static_cast<int>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) v(static_cast<int>(i)) = complex_from_json(j[i]);
  return v;
}

json point_to_json(const FinslerPoint& p) { return {{"z", vector_to_json(p.z)}, {"v", vector_to_json(p.v)}}; }

FinslerPoint point_from_json(const json& j) {
  if (!j.contains("z") || !j.contains("v")) fail(ErrorKind::invalid_argument, "point needs \"z\" and \"v\"");
  FinslerPoint p(vector_from_json(j.at("z")), vector_from_json(j.at("v")));
  validate_point(p);
  return p;
}

}  // namespace finsler
