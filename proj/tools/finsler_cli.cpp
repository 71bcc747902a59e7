#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "finsler/curvature.hpp"
#include "finsler/dsl.hpp"
#include "finsler/errors.hpp"
#include "finsler/report.hpp"
#include "finsler/suite.hpp"
#include "finsler/variation.hpp"

using namespace finsler;

namespace {

struct Args {
  std::string config;
  std::string builtin;
  int n = 0;
  std::vector<std::string> params;
  std::string g;
  std::string dsl;
  bool jets_only = false;
  std::optional<uint64_t> seed;
  std::optional<int> count;
  std::optional<int> grid;
  std::optional<double> radius;
  std::string z, v;
  std::string from, dir;
  double T = 1.0;
  std::string format;
  std::string output;
  std::vector<std::string> tols;
  std::optional<double> c;
  bool no_timestamp = false;
  // command specific
  std::string H;
  double solver_tol = 1e-9;
  std::string variation_order = "first";
  std::string base = "geodesic";
  std::string bump;
  std::string kind = "sine";
  bool quick = false;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

std::pair<std::string, double> key_value(const std::string& s) {
  const auto eq = s.find('=');
  if (eq == std::string::npos) fail(ErrorKind::invalid_argument, "expected key=value, got '" + s + "'");
  try {
    return {s.substr(0, eq), std::stod(s.substr(eq + 1))};
  } catch (const std::exception&) {
    fail(ErrorKind::invalid_argument, "bad number in '" + s + "'");
  }
}

RunConfig build_config(const Args& a) {
  RunConfig cfg;
  if (!a.config.empty()) cfg = RunConfig::load(a.config);
  if (!a.builtin.empty() && !a.dsl.empty()) fail(ErrorKind::invalid_argument, "give either --builtin or --dsl");
  if (!a.builtin.empty()) {
    cfg.metric = MetricSpec{};
    cfg.metric.builtin.name = a.builtin;
    cfg.metric.builtin.n = a.n > 0 ? a.n : 1;
    cfg.metric.n = cfg.metric.builtin.n;
    for (const std::string& p : a.params) cfg.metric.builtin.numbers.insert(key_value(p));
    if (!a.g.empty()) {
      for (const std::string& row : split(a.g, ';')) cfg.metric.builtin.matrix.push_back(split(row, ','));
    }
  } else if (!a.dsl.empty()) {
    cfg.metric = MetricSpec{};
    cfg.metric.is_dsl = true;
    cfg.metric.expr = a.dsl;
    cfg.metric.n = a.n > 0 ? a.n : 1;
  } else if (a.config.empty()) {
    fail(ErrorKind::invalid_argument, "no metric: use --builtin, --dsl or --config");
  }
  if (a.jets_only) cfg.metric.jets_only = true;

  SampleSpec& s = cfg.samples;
  if (a.seed) s.seed = *a.seed;
  if (a.count) {
    s.mode = "random";
    s.count = *a.count;
  }
  if (a.grid) {
    s.mode = "grid";
    s.grid = *a.grid;
    if (!a.radius) s.radius = 0.9;
  }
  if (a.radius) s.radius = *a.radius;
  if (!a.z.empty() || !a.v.empty()) {
    if (a.z.empty() || a.v.empty()) fail(ErrorKind::invalid_argument, "--z and --v go together");
    FinslerPoint p(parse_complex_vector(a.z), parse_complex_vector(a.v));
    validate_point(p);
    s.mode = "points";
    s.points = {p};
  }
  if (s.count < 1 || s.grid < 1) fail(ErrorKind::invalid_argument, "sample counts must be positive");
  for (const std::string& t : a.tols) {
    const auto kv = key_value(t);
    if (!(kv.second > 0)) fail(ErrorKind::invalid_argument, "tolerance '" + kv.first + "' must be positive");
    cfg.tolerances[kv.first] = kv.second;
  }
  if (!a.format.empty()) cfg.format = a.format;
  if (cfg.format != "json" && cfg.format != "csv") fail(ErrorKind::invalid_argument, "format must be json or csv");
  if (!a.output.empty()) cfg.output = a.output;
  return cfg;
}

bool recoverable(const Error& e) {
  return e.kind() == ErrorKind::degenerate_metric || e.kind() == ErrorKind::domain_error ||
         e.kind() == ErrorKind::not_a_metric || e.kind() == ErrorKind::singular_evaluation;
}

// Runs f on every sample point; in sampled modes failures are recorded instead of aborting.
json per_point(const FinslerMetric& m, const RunConfig& cfg, const std::function<json(const FinslerPoint&)>& f) {
  const auto pts = cfg.samples.generate(m.dim());
  const bool strict = cfg.samples.mode == "points";
  json rows = json::array(), excluded = json::array();
  for (size_t i = 0; i < pts.size(); ++i) {
    try {
      json r = f(pts[i]);
      r["point"] = point_to_json(pts[i]);
      rows.push_back(std::move(r));
    } catch (const Error& e) {
      if (strict || !recoverable(e)) throw;
      excluded.push_back({{"index", i}, {"reason", e.what()}});
    }
  }
  return {{"points", rows}, {"excluded", excluded}};
}

void require_json(const RunConfig& cfg, const std::string& cmd) {
  if (cfg.format != "json") fail(ErrorKind::invalid_argument, cmd + " only writes json");
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.output);
  if (!out) fail(ErrorKind::invalid_argument, "cannot write " + cfg.output);
  out << text;
}

CVector require_vector(const std::string& s, const std::string& flag, int n) {
  if (s.empty()) fail(ErrorKind::invalid_argument, flag + " is required");
  CVector x = parse_complex_vector(s);
  if (x.size() != n) fail(ErrorKind::invalid_argument, flag + " must have " + std::to_string(n) + " entries");
  return x;
}

json jet_json(const MetricJet& j) {
  const int n = j.dim();
  json gv = json::array(), gz = json::array();
  CMatrix vv(n, n), vbz(n, n);
  for (int a = 0; a < n; ++a) {
    gv.push_back(complex_to_json(j.G_v(a)));
    gz.push_back(complex_to_json(j.G_z(a)));
    for (int b = 0; b < n; ++b) {
      vv(a, b) = j.G_vv(a, b);
      vbz(a, b) = j.G_vb_z(a, b);
    }
  }
  return {{"G", j.G()}, {"G_v", gv}, {"G_z", gz}, {"G_vvbar", matrix_to_json(j.levi())},
          {"G_vv", matrix_to_json(vv)}, {"G_vbar_z", matrix_to_json(vbz)},
          {"homogeneity", residuals_to_json(homogeneity_residuals(j))}};
}

json kahler_json(const KahlerResiduals& k) {
  return {{"strong", k.strong}, {"kahler", k.kahler}, {"weak", k.weak}, {"hermitian", k.hermitian},
          {"mixed_torsion", k.mixed_torsion}, {"strong_raw", k.strong_raw}, {"kahler_raw", k.kahler_raw},
          {"weak_raw", k.weak_raw}, {"hermitian_raw", k.hermitian_raw}};
}

std::string csv_number(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

int run(const std::string& cmd, const Args& a) {
  const RunConfig cfg = build_config(a);
  const FinslerMetric m = cfg.metric.build();
  const int n = m.dim();
  json config = cfg.to_json();
  json result;
  int status = 0;
  GeodesicOptions go;
  go.tol = a.solver_tol;

  if (cmd == "jet") {
    require_json(cfg, cmd);
    result = per_point(m, cfg, [&](const FinslerPoint& p) { return jet_json(m.evaluate(p)); });
  } else if (cmd == "levi") {
    require_json(cfg, cmd);
    result = per_point(m, cfg, [&](const FinslerPoint& p) {
      const LeviData L = levi_data(m.evaluate(p, 2));
      return json{{"matrix", matrix_to_json(L.matrix)}, {"inverse", matrix_to_json(L.inverse)},
                  {"min_eigenvalue", L.min_eigenvalue}, {"determinant_abs", L.determinant_abs},
                  {"strongly_pseudoconvex", L.strongly_pseudoconvex}};
    });
  } else if (cmd == "connection") {
    require_json(cfg, cmd);
    result = per_point(m, cfg, [&](const FinslerPoint& p) {
      const PointGeometry g = point_geometry(m, p);
      ResidualSet r = horizontal_frame_residuals(g);
      r.merge_max(connection_invariant_residuals(g));
      return json{{"gamma_semicolon", tensor_to_json(g.connection.gamma_semicolon)},
                  {"gamma_mixed", tensor_to_json(g.connection.gamma_mixed)},
                  {"gamma_vertical", tensor_to_json(g.connection.gamma_vertical)},
                  {"residuals", residuals_to_json(r)}};
    });
  } else if (cmd == "torsion") {
    require_json(cfg, cmd);
    result = per_point(m, cfg, [&](const FinslerPoint& p) {
      const PointGeometry g = point_geometry(m, p);
      const TorsionData t = torsion_components(g.connection, g.deltas);
      return json{{"theta_horizontal", tensor_to_json(t.theta_horizontal)},
                  {"theta_mixed", tensor_to_json(t.theta_mixed)},
                  {"tau_zzbar", tensor_to_json(t.tau_zzbar)},
                  {"tau_zpsibar", tensor_to_json(t.tau_zpsibar)},
                  {"theta_dot", theta_dot_residual(g)},
                  {"kahler", kahler_json(kahler_residuals(g))}};
    });
  } else if (cmd == "classify") {
    require_json(cfg, cmd);
    const double tol = cfg.tolerance("kahler", default_kahler_tolerance(m));
    const KahlerReport k = kahler_classify(m, cfg.samples.generate(n), tol);
    json ex = json::array();
    for (const ExcludedSample& e : k.excluded) ex.push_back({{"index", e.index}, {"reason", e.reason}});
    result = {{"hermitian", k.hermitian}, {"strongly_kahler", k.strongly_kahler}, {"kahler", k.kahler},
              {"weakly_kahler", k.weakly_kahler}, {"tol", k.tol}, {"samples", k.samples},
              {"residuals", kahler_json(k.max)},
              {"worst", {{"strong", k.worst_strong}, {"kahler", k.worst_kahler}, {"weak", k.worst_weak},
                         {"hermitian", k.worst_hermitian}}},
              {"excluded", ex}};
  } else if (cmd == "curvature") {
    require_json(cfg, cmd);
    const DrawSet draws = random_draws(n, 20, cfg.samples.seed + 17);
    result = per_point(m, cfg, [&](const FinslerPoint& p) {
      const CurvatureContext c = curvature_context(m, p);
      ResidualSet r = curvature_symmetry_residuals(c, draws);
      r.merge_max(block_symmetry_residuals(c.blocks));
      r.set("tau_contraction", tau_contraction_residual(c));
      r.merge_max(bianchi_residuals(c));
      return json{{"R_hh", tensor_to_json(c.blocks.R_hh)}, {"R_vh", tensor_to_json(c.blocks.R_vh)},
                  {"R_hv", tensor_to_json(c.blocks.R_hv)}, {"R_vv", tensor_to_json(c.blocks.R_vv)},
                  {"holomorphic_curvature", holomorphic_curvature_value(c.geometry).value},
                  {"residuals", residuals_to_json(r)}};
    });
  } else if (cmd == "holcurv") {
    const auto pts = cfg.samples.generate(n);
    std::vector<std::pair<size_t, double>> vals;
    json rows = json::array(), excluded = json::array();
    double lo = INFINITY, hi = -INFINITY;
    for (size_t i = 0; i < pts.size(); ++i) {
      try {
        const double k = holomorphic_curvature(m, pts[i]);
        vals.emplace_back(i, k);
        lo = std::min(lo, k);
        hi = std::max(hi, k);
        rows.push_back({{"point", point_to_json(pts[i])}, {"K_F", k}});
      } catch (const Error& e) {
        if (cfg.samples.mode == "points" || !recoverable(e)) throw;
        excluded.push_back({{"index", i}, {"reason", e.what()}});
      }
    }
    if (cfg.format == "csv") {
      std::ostringstream os;
      os << "index";
      for (int k = 1; k <= n; ++k) os << ",re_z" << k << ",im_z" << k;
      for (int k = 1; k <= n; ++k) os << ",re_v" << k << ",im_v" << k;
      os << ",K_F\n";
      for (const auto& [i, k] : vals) {
        os << i;
        for (int q = 0; q < n; ++q) os << ',' << csv_number(pts[i].z(q).real()) << ',' << csv_number(pts[i].z(q).imag());
        for (int q = 0; q < n; ++q) os << ',' << csv_number(pts[i].v(q).real()) << ',' << csv_number(pts[i].v(q).imag());
        os << ',' << csv_number(k) << '\n';
      }
      emit(cfg, os.str());
      return 0;
    }
    result = {{"min", lo}, {"max", hi}, {"points", rows}, {"excluded", excluded}};
  } else if (cmd == "flagcurv") {
    require_json(cfg, cmd);
    const DrawSet draws = random_draws(n, 20, cfg.samples.seed + 17);
    std::vector<CVector> hs = draws.H;
    if (!a.H.empty()) hs = {require_vector(a.H, "--H", n)};
    config["H"] = a.H.empty() ? json("random") : json(vector_to_json(hs[0]));
    result = per_point(m, cfg, [&](const FinslerPoint& p) {
      const CurvatureContext c = curvature_context(m, p);
      json vals = json::array();
      double mx = -INFINITY;
      for (const CVector& H : hs) {
        const double f = flag_curvature(c, H);
        mx = std::max(mx, f);
        vals.push_back({{"H", vector_to_json(H)}, {"flag", f}});
      }
      return json{{"max", mx}, {"values", vals}};
    });
  } else if (cmd == "geodesic" || cmd == "expmap") {
    const CVector p = require_vector(a.from, "--from", n), v = require_vector(a.dir, "--dir", n);
    config["from"] = vector_to_json(p);
    config["dir"] = vector_to_json(v);
    config["solver_tol"] = go.tol;
    if (cmd == "expmap") {
      require_json(cfg, cmd);
      result = {{"endpoint", vector_to_json(exp_map(m, p, v, go))}};
    } else {
      config["T"] = a.T;
      const GeodesicPath path = integrate_geodesic(m, p, v, a.T, go);
      if (cfg.format == "csv") {
        emit(cfg, path_to_csv(path));
        return 0;
      }
      result = path_to_json(path);
      result["endpoint"] = vector_to_json(path.back().sigma);
      result["end_time"] = path.times.back();
    }
  } else if (cmd == "length") {
    require_json(cfg, cmd);
    const CVector p = require_vector(a.from, "--from", n), d = require_vector(a.dir, "--dir", n);
    config["from"] = vector_to_json(p);
    config["dir"] = vector_to_json(d);
    config["T"] = a.T;
    const Curve line{[p, d](double t) -> CVector { return p + t * d; }, [d](double) -> CVector { return d; }};
    result = {{"curve", "segment"}, {"length", curve_length(m, line, 0.0, a.T)}};
  } else if (cmd == "variation") {
    require_json(cfg, cmd);
    const CVector p = require_vector(a.from, "--from", n), d = require_vector(a.dir, "--dir", n);
    const CVector w = require_vector(a.bump, "--bump", n);
    BaseCurve base;
    if (a.base == "line") {
      base = line_curve(p, d, 0.0, a.T);
    } else if (a.base == "geodesic") {
      base = geodesic_curve(m, p, d, a.T, go);
    } else {
      fail(ErrorKind::invalid_argument, "--base must be line or geodesic");
    }
    const BumpKind kind = bump_kind_from_string(a.kind);
    config["variation"] = {{"order", a.variation_order}, {"base", a.base}, {"from", vector_to_json(p)},
                           {"dir", vector_to_json(d)}, {"T", a.T}, {"bump", vector_to_json(w)},
                           {"kind", to_string(kind)}};
    const VariationSpec spec = bump_variation(base, w, kind);
    VariationResult r;
    if (a.variation_order == "first") {
      r = first_variation_check(m, spec);
    } else if (a.variation_order == "second") {
      r = second_variation_check(m, spec);
    } else {
      fail(ErrorKind::invalid_argument, "variation order must be first or second");
    }
    result = {{"formula", r.formula}, {"numeric", r.numeric}, {"residual", r.residual}, {"h", r.h},
              {"boundary_term", r.boundary_term}, {"integral_term", r.integral_term},
              {"curvature_term", r.curvature_term}, {"symmetric_term", r.symmetric_term},
              {"speed_variation", r.speed_variation}, {"geodesic_residual", r.geodesic_residual},
              {"kahler_residual", r.kahler_residual}, {"re_ut_variation", r.re_ut_variation}, {"nodes", r.nodes}};
  } else if (cmd == "verify") {
    require_json(cfg, cmd);
    SuiteOptions so;
    so.samples = cfg.samples;
    so.curvature_c = a.c ? a.c : known_curvature_constant(m);
    so.solver_tol = a.solver_tol;
    so.tolerances = cfg.tolerances;
    if (a.quick) so.variations = false;
    if (so.curvature_c) config["c"] = *so.curvature_c;
    const SuiteReport rep = run_verify_suite(m, so);
    result = rep.to_json();
    for (const SuiteCheck& c : rep.checks) {
      if (!c.passed) std::cerr << "FAIL " << c.group << "/" << c.name << ": " << c.value << " vs " << c.tolerance << "\n";
    }
    if (!rep.passed()) status = 1;
  } else if (cmd == "estimate-c") {
    require_json(cfg, cmd);
    const CurvatureEstimate e = estimate_constant_curvature(m, cfg.samples.generate(n));
    result = {{"c", e.c}, {"stddev", e.stddev}, {"samples", e.samples}, {"holomorphic_curvature", 2 * e.c}};
  }

  emit(cfg, make_report(cmd, config, result, !a.no_timestamp).dump(2) + "\n");
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Computations with strongly pseudoconvex complex Finsler metrics"};
  app.require_subcommand(1);
  Args a;

  auto add_common = [&](CLI::App* s) {
    s->add_option("--config", a.config, "RunConfig JSON file");
    s->add_option("--builtin", a.builtin, "euclidean | poincare_ball | lp_finsler | hermitian_field");
    s->add_option("--n", a.n, "complex dimension");
    s->add_option("--param", a.params, "metric parameter key=value (lp_finsler: p)");
    s->add_option("--g", a.g, "hermitian_field matrix, entries by ',' and rows by ';'");
    s->add_option("--dsl", a.dsl, "metric expression for G in z1.. and v1..");
    s->add_flag("--jets-only", a.jets_only, "disable closed-form providers");
    s->add_option("--seed", a.seed, "random sample seed");
    s->add_option("--count", a.count, "random sample count");
    s->add_option("--grid", a.grid, "deterministic k x k grid");
    s->add_option("--radius", a.radius, "sample radius in z");
    s->add_option("--z", a.z, "explicit base point, comma-separated complex");
    s->add_option("--v", a.v, "explicit fibre vector");
    s->add_option("--format", a.format, "json | csv");
    s->add_option("--output", a.output, "output file (default stdout)");
    s->add_option("--tol", a.tols, "tolerance override name=value");
    s->add_flag("--no-timestamp", a.no_timestamp, "omit metadata.generated");
  };
  auto add_path = [&](CLI::App* s) {
    s->add_option("--from", a.from, "start point");
    s->add_option("--dir", a.dir, "initial velocity");
    s->add_option("--T", a.T, "final time");
    s->add_option("--solver-tol", a.solver_tol, "adaptive step tolerance");
  };

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"jet", "Wirtinger derivatives of G and homogeneity residuals"},
      {"levi", "Levi matrix, inverse and positivity"},
      {"connection", "Chern-Finsler connection coefficients"},
      {"torsion", "torsion components and Kahler residuals"},
      {"classify", "hermitian / Kahler classification over samples"},
      {"curvature", "curvature blocks and symmetry residuals"},
      {"holcurv", "holomorphic curvature K_F"},
      {"flagcurv", "flag curvature in direction H"},
      {"geodesic", "integrate a geodesic"},
      {"expmap", "exponential map"},
      {"length", "length of the segment from + t dir, t in [0, T]"},
      {"variation", "first or second variation check"},
      {"verify", "full invariant suite"},
      {"estimate-c", "fit a constant holomorphic curvature"},
  };
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, help] : commands) {
    CLI::App* s = app.add_subcommand(name, help);
    add_common(s);
    subs[name] = s;
  }
  for (const char* name : {"geodesic", "expmap", "length", "variation", "verify"}) add_path(subs[name]);
  subs["flagcurv"]->add_option("--H", a.H, "horizontal direction (default: random draws)");
  subs["variation"]->add_option("order", a.variation_order, "first | second")->required();
  subs["variation"]->add_option("--base", a.base, "line | geodesic");
  subs["variation"]->add_option("--bump", a.bump, "bump vector w");
  subs["variation"]->add_option("--kind", a.kind, "sine | polynomial | linear");
  subs["verify"]->add_option("--c", a.c, "expected constant: K_F = 2c");
  subs["verify"]->add_flag("--quick", a.quick, "skip the variation checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  std::string cmd;
  for (const auto& [name, s] : subs) {
    if (s->parsed()) cmd = name;
  }
  try {
    return run(cmd, a);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::invalid_argument:
      case ErrorKind::parse_error: return 2;
      default: return 3;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
