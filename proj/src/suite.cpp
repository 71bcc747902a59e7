#include "finsler/suite.hpp"

#include <chrono>
#include <cmath>

#include "finsler/curvature.hpp"
#include "finsler/errors.hpp"
#include "finsler/geodesics.hpp"
#include "finsler/report.hpp"
#include "finsler/variation.hpp"

namespace finsler {

namespace {

// Keeps checks in first-seen order and folds repeated samples into the worst value.
class Collector {
 public:
  explicit Collector(const std::map<std::string, double>& overrides) : overrides_(overrides) {}

  void add(const std::string& group, const std::string& name, double value, double tol,
           const std::string& relation = "<") {
    auto it = index_.find(name);
    if (it == index_.end()) {
      SuiteCheck c;
      c.group = group;
      c.name = name;
      c.relation = relation;
      auto o = overrides_.find(name);
      c.tolerance = o == overrides_.end() ? tol : o->second;
      c.value = value;
      index_[name] = checks_.size();
      checks_.push_back(c);
      it = index_.find(name);
    }
    SuiteCheck& c = checks_[it->second];
    const bool lower = c.relation == ">";
    // NaN always counts as the worst value
    if (std::isnan(value) || (lower ? value < c.value : value > c.value)) c.value = value;
    ++c.samples;
  }

  void add_all(const std::string& group, const ResidualSet& r, double tol) {
    for (const auto& [k, v] : r.entries()) add(group, k, v, tol);
  }

  std::vector<SuiteCheck> finish() {
    for (SuiteCheck& c : checks_) {
      if (c.relation == "<") c.passed = c.value < c.tolerance;
      if (c.relation == "<=") c.passed = c.value <= c.tolerance;
      if (c.relation == ">") c.passed = c.value > c.tolerance;
    }
    return checks_;
  }

 private:
  const std::map<std::string, double>& overrides_;
  std::vector<SuiteCheck> checks_;
  std::map<std::string, size_t> index_;
};

bool is_recoverable(const Error& e) {
  return e.kind() == ErrorKind::degenerate_metric || e.kind() == ErrorKind::domain_error ||
         e.kind() == ErrorKind::not_a_metric || e.kind() == ErrorKind::singular_evaluation;
}

bool declared_hermitian(const FinslerMetric& m) {
  return m.name() == "euclidean" || m.name() == "poincare_ball" || m.name() == "hermitian_field";
}

double rescaling_residual(const FinslerMetric& m, const FinslerPoint& p) {
  const int n = m.dim();
  const MetricJet j0 = m.evaluate(p, 2);
  double scale = 1.0, r = 0.0;
  for (int a = 0; a < n; ++a) {
    scale = std::max(scale, std::abs(j0.G_v(a)));
    for (int b = 0; b < n; ++b) scale = std::max(scale, std::abs(j0.G_vvb(a, b)));
  }
  for (cplx zeta : {cplx(2.0), cplx(0.0, 1.0), cplx(0.3, 0.4)}) {
    const MetricJet j = m.evaluate(FinslerPoint(p.z, zeta * p.v), 2);
    for (int a = 0; a < n; ++a) {
      r = std::max(r, std::abs(j.G_v(a) - std::conj(zeta) * j0.G_v(a)) / (std::abs(zeta) * scale));
      for (int b = 0; b < n; ++b) r = std::max(r, std::abs(j.G_vvb(a, b) - j0.G_vvb(a, b)) / scale);
    }
  }
  return r;
}

double projective_residual(const FinslerMetric& m, const FinslerPoint& p, double kf) {
  double r = 0.0;
  for (cplx zeta : {cplx(2.0), cplx(0.0, 1.0), cplx(0.3, 0.4)}) {
    r = std::max(r, std::abs(holomorphic_curvature(m, FinslerPoint(p.z, zeta * p.v)) - kf));
  }
  return r;
}

// Geodesic starts well inside the domain with unit-speed velocities.
std::vector<std::pair<CVector, CVector>> geodesic_starts(const FinslerMetric& m, int count, uint64_t seed) {
  Rng rng(seed);
  std::vector<std::pair<CVector, CVector>> out;
  const int n = m.dim();
  for (int i = 0; i < count; ++i) {
    CVector z = 0.3 * rng.uniform() * rng.unit_sphere(n);
    CVector v = rng.unit_sphere(n);
    v /= metric_speed(m, z, v);
    out.emplace_back(z, v);
  }
  return out;
}

void pointwise_checks(const FinslerMetric& m, const SuiteOptions& opts, Collector& col, SuiteReport& rep) {
  const int n = m.dim();
  const bool dsl = m.name() == "dsl";
  const double hom_tol = dsl ? 1e-6 : 1e-9;
  const auto pts = opts.samples.generate(n);
  rep.kahler = kahler_classify(m, pts, default_kahler_tolerance(m));
  const bool kahler = rep.kahler.kahler, strongly = rep.kahler.strongly_kahler;
  const auto c = opts.curvature_c;
  const DrawSet draws = random_draws(n, opts.draws, opts.samples.seed + 17);

  for (size_t i = 0; i < pts.size(); ++i) {
    const FinslerPoint& p = pts[i];
    try {
      const CurvatureContext cc = curvature_context(m, p);
      const PointGeometry& g = cc.geometry;
      col.add_all("metric", homogeneity_residuals(g.metric()), hom_tol);
      col.add("metric", "rescaling_invariance", rescaling_residual(m, p), 1e-9);
      col.add("metric", "levi_min_eigenvalue", g.levi().min_eigenvalue, kPseudoconvexEpsilon, ">");

      col.add_all("connection", horizontal_frame_residuals(g), 1e-8);
      col.add_all("connection", connection_invariant_residuals(g), 1e-9);
      const double G = cc.G();
      double sym_chi = 0;
      for (const CVector& H : draws.H) sym_chi = std::max(sym_chi, std::abs(cc.symmetric(H, cc.chi())) / (1 + G));
      col.add("connection", "chi_isometry", std::abs(cc.hermitian(cc.chi(), cc.chi()) - G) / G, 1e-12);
      col.add("connection", "symmetric_chi", sym_chi, 1e-9);

      col.add("torsion", "theta_dot", theta_dot_residual(g), 1e-8);
      if (declared_hermitian(m)) {
        col.add("torsion", "mixed_torsion_hermitian", kahler_residuals(g).mixed_torsion, 1e-10);
      }

      const ResidualSet sym = curvature_symmetry_residuals(cc, draws);
      col.add("curvature", "antisymmetry", sym.get("antisymmetry"), 1e-9);
      col.add("curvature", "conjugate_symmetry", sym.get("conjugate_symmetry"), 1e-9);
      if (kahler) col.add("curvature", "pair_symmetry", sym.get("pair_symmetry"), 1e-8);
      if (strongly) col.add("curvature", "dbar_theta", sym.get("dbar_theta"), 1e-8);
      col.add("curvature", "holomorphic_two_routes", sym.get("holomorphic_two_routes"), 1e-9);
      col.add("curvature", "holomorphic_imaginary", sym.get("holomorphic_imaginary"), 1e-9);
      col.add_all("curvature", block_symmetry_residuals(cc.blocks), 1e-10);
      col.add("curvature", "tau_contraction", tau_contraction_residual(cc), 1e-8);
      col.add_all("curvature", bianchi_residuals(cc), 1e-6);
      const double kf = holomorphic_curvature_value(g).value;
      col.add("curvature", "projective_invariance", projective_residual(m, p, kf), 1e-8);

      if (c) {
        const ResidualSet cr = constant_curvature_residuals(cc, *c, draws);
        for (const auto& [k, v] : cr.entries()) {
          if (k == "flag_max") {
            col.add("constant_curvature", k, v, 1e-8, "<=");
          } else {
            col.add("constant_curvature", k, v, k == "flag_decomposition" ? 1e-7 : 1e-6);
          }
        }
      }
    } catch (const Error& e) {
      if (!is_recoverable(e)) throw;
      rep.excluded.push_back({static_cast<int>(i), e.what()});
    }
  }
  if (rep.excluded.size() == pts.size()) fail(ErrorKind::degenerate_metric, "no usable sample points");

  if (c) {
    // K_F = 2c on the deterministic grid
    const double tol = m.has_analytic() ? 1e-8 : 1e-6;
    for (const FinslerPoint& p : grid_points(n, 10, 0.9)) {
      try {
        col.add("constant_curvature", "holomorphic_constant_grid", std::abs(holomorphic_curvature(m, p) - 2 * *c), tol);
      } catch (const Error& e) {
        if (!is_recoverable(e)) throw;
      }
    }
  }
  if (m.name() == "lp_finsler") {
    const FinslerPoint probe(CVector::Zero(n), CVector::Ones(n));
    const double mt = kahler_residuals(point_geometry(m, probe)).mixed_torsion;
    // p = 2 is the Euclidean member
    const double p2 = std::abs(m.value(FinslerPoint(CVector::Zero(n), CVector::Ones(n))) - n);
    if (p2 > 1e-12) col.add("torsion", "mixed_torsion_detected", mt, 1e-2, ">");
  }
}

void geodesic_checks(const FinslerMetric& m, const SuiteOptions& opts, Collector& col, const SuiteReport& rep) {
  const int n = m.dim();
  GeodesicOptions go;
  go.tol = opts.solver_tol;
  const bool weak = rep.kahler.weakly_kahler;
  const double T = 0.5;
  const auto starts = geodesic_starts(m, opts.geodesic_starts, opts.samples.seed + 101);
  for (const auto& [z, v] : starts) {
    const GeodesicPath path = integrate_geodesic(m, z, v, T, go);
    if (weak) col.add("geodesics", "speed_drift", path.speed_drift(), 10 * go.tol);
    const GeodesicState mid = path_state_at(m, path, 0.5 * T);
    const GeodesicPath tail = integrate_geodesic(m, mid.sigma, mid.velocity, 0.5 * T, go);
    col.add("geodesics", "uniqueness_tail", (tail.back().sigma - path.back().sigma).norm(), 1e-6);
    col.add("geodesics", "exp_zero", (exp_map(m, z, CVector::Zero(n), go) - z).norm(), 1e-15, "<=");
    if (m.name() == "euclidean") {
      col.add("geodesics", "flat_straight_line", (path.back().sigma - (z + T * v)).norm(), 1e-10);
    }
    // fixed-step order: errors against a tight adaptive reference
    GeodesicOptions tight = go;
    tight.tol = 1e-13;
    const CVector ref = integrate_geodesic(m, z, v, 1.0, tight).back().sigma;
    const double e1 = (integrate_fixed_step(m, z, v, 1.0, 20).back().sigma - ref).norm();
    const double e2 = (integrate_fixed_step(m, z, v, 1.0, 40).back().sigma - ref).norm();
    if (e2 > 1e-11) col.add("geodesics", "rk4_order", std::abs(e1 / e2 - 16.0) / 16.0, 0.25);
    if (weak) {
      Rng rng(opts.samples.seed + 211);
      const BaseCurve base = geodesic_curve(m, z, v, T, go);
      for (int k = 0; k < 5; ++k) {
        const CVector w = 0.3 * rng.complex_normal(n);
        const BumpKind kind = k % 2 == 0 ? BumpKind::sine : BumpKind::polynomial;
        const VariationResult r = first_variation_check(m, bump_variation(base, w, kind));
        col.add("geodesics", "criticality", std::abs(r.numeric), 1e-5);
      }
    }
  }
  if (m.name() == "poincare_ball") {
    CVector e1 = CVector::Zero(n);
    e1(0) = 1.0;
    for (double t : {0.5, 1.0, 2.0, 3.0}) {
      for (double th : {0.0, M_PI / 3, M_PI / 2}) {
        const cplx u = std::polar(1.0, th);
        const CVector got = exp_map(m, CVector::Zero(n), CVector(t * u * e1), go);
        col.add("geodesics", "disk_tanh_exactness", (got - std::tanh(t) * u * e1).norm(), 1e-6);
      }
    }
    const Curve line{[e1](double t) -> CVector { return 0.5 * t * e1; }, [e1](double) -> CVector { return 0.5 * e1; }};
    col.add("geodesics", "disk_length", std::abs(curve_length(m, line, 0.0, 1.0) - std::atanh(0.5)), 1e-8);
  }
}

void variation_checks(const FinslerMetric& m, const SuiteOptions& opts, Collector& col, const SuiteReport& rep) {
  const int n = m.dim();
  GeodesicOptions go;
  go.tol = opts.solver_tol;
  Rng rng(opts.samples.seed + 307);
  CVector e1 = CVector::Zero(n), orth = CVector::Zero(n);
  e1(0) = 1.0;
  if (n >= 2) {
    orth(1) = 1.0;
  } else {
    orth(0) = cplx(0.0, 1.0);  // i e1 is Levi-orthogonal to real velocities
  }
  if (rep.kahler.weakly_kahler) {
    const CVector z0 = 0.2 * rng.unit_sphere(n);
    const CVector d = 0.6 * rng.unit_sphere(n);
    const VariationResult r =
        first_variation_check(m, bump_variation(line_curve(z0, d, 0.0, 1.0), 0.3 * rng.complex_normal(n), BumpKind::sine));
    col.add("variation", "first_variation_nongeodesic", r.residual, 1e-4);
  }
  if (rep.kahler.kahler && rep.kahler.weakly_kahler) {
    const auto starts = geodesic_starts(m, 1, opts.samples.seed + 401);
    const BaseCurve base = geodesic_curve(m, starts[0].first, starts[0].second, 0.8, go);
    const VariationResult r = second_variation_check(m, bump_variation(base, 0.3 * rng.complex_normal(n), BumpKind::sine));
    if (rep.kahler.hermitian) {
      col.add("variation", "second_variation", r.residual, 1e-3);
    } else {
      col.add("variation", "second_variation_with_symmetric_term",
              std::abs(r.formula + r.symmetric_term - r.numeric), 1e-3);
    }
  }
  if (m.name() == "euclidean") {
    const VariationResult r = second_variation_check(
        m, bump_variation(line_curve(CVector::Zero(n), e1, 0.0, 1.0), orth, BumpKind::sine));
    col.add("variation", "second_variation_flat_sine", std::abs(r.formula - M_PI * M_PI / 2), 1e-4);
    col.add("variation", "second_variation_flat_agreement", r.residual, 1e-4);
  }
  if (m.name() == "poincare_ball") {
    const VariationResult r = second_variation_check(m, bump_variation(tanh_curve(e1, 0.0, 1.0), orth, BumpKind::sine));
    col.add("variation", "second_variation_radial", r.residual, 1e-3);
    col.add("variation", "second_variation_exceeds_flat", r.formula - M_PI * M_PI / 2, 0.0, ">");
    const VariationResult f = first_variation_check(m, bump_variation(tanh_curve(e1, 0.0, 1.0), orth, BumpKind::polynomial));
    col.add("variation", "first_variation_radial_geodesic", std::abs(f.formula) + std::abs(f.numeric), 1e-5);
  }
}

}  // namespace

bool SuiteReport::passed() const {
  for (const SuiteCheck& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

json SuiteReport::to_json() const {
  json checks_j = json::array();
  for (const SuiteCheck& c : checks) {
    checks_j.push_back({{"group", c.group},
                        {"name", c.name},
                        {"value", c.value},
                        {"relation", c.relation},
                        {"tolerance", c.tolerance},
                        {"samples", c.samples},
                        {"passed", c.passed}});
  }
  json ex = json::array();
  for (const ExcludedSample& e : excluded) ex.push_back({{"index", e.index}, {"reason", e.reason}});
  return {{"passed", passed()},
          {"kahler",
           {{"strongly_kahler", kahler.strongly_kahler},
            {"kahler", kahler.kahler},
            {"weakly_kahler", kahler.weakly_kahler},
            {"hermitian", kahler.hermitian}}},
          {"checks", checks_j},
          {"excluded", ex}};
}

std::optional<double> known_curvature_constant(const FinslerMetric& m) {
  if (m.name() == "euclidean" || m.name() == "lp_finsler") return 0.0;
  if (m.name() == "poincare_ball") return -2.0;
  return std::nullopt;
}

SuiteReport run_verify_suite(const FinslerMetric& m, const SuiteOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  SuiteReport rep;
  Collector col(opts.tolerances);
  pointwise_checks(m, opts, col, rep);
  if (opts.geodesics) geodesic_checks(m, opts, col, rep);
  if (opts.variations) variation_checks(m, opts, col, rep);
  rep.checks = col.finish();
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace finsler
