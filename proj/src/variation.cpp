#include "finsler/variation.hpp"

#include <algorithm>
#include <boost/math/interpolators/cardinal_quintic_b_spline.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <memory>

#include "finsler/curvature.hpp"
#include "finsler/errors.hpp"
#include "finsler/torsion.hpp"

namespace finsler {

namespace {

constexpr int kGaussOrder = 10;

struct Node {
  double t, w;
};

std::vector<Node> quadrature_nodes(double a, double b, int panels) {
  using rule = boost::math::quadrature::gauss<double, kGaussOrder>;
  const auto& x = rule::abscissa();
  const auto& w = rule::weights();
  std::vector<Node> nodes;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double c = a + (p + 0.5) * h, r = 0.5 * h;
    for (size_t i = 0; i < x.size(); ++i) {
      nodes.push_back({c - r * x[i], r * w[i]});
      if (x[i] != 0.0) nodes.push_back({c + r * x[i], r * w[i]});
    }
  }
  std::sort(nodes.begin(), nodes.end(), [](const Node& l, const Node& r) { return l.t < r.t; });
  return nodes;
}

void check_spec(const FinslerMetric& m, const VariationSpec& v) {
  if (!v.position || !v.velocity || !v.U || !v.U_dot || !v.base_acceleration) {
    fail(ErrorKind::invalid_argument, "variation is missing Sigma or its derivatives");
  }
  if (!(v.b > v.a)) fail(ErrorKind::invalid_argument, "variation needs a < b");
  if (v.position(0.0, v.a).size() != m.dim()) {
    fail(ErrorKind::invalid_argument, "variation dimension does not match the metric");
  }
}

// Gamma^a_{;m} from an order >= 2 metric jet.
CMatrix gamma_semicolon(const MetricJet& j, const LeviData& L) {
  const int n = j.dim();
  CMatrix g = CMatrix::Zero(n, n);
  for (int a = 0; a < n; ++a) {
    for (int mu = 0; mu < n; ++mu) {
      for (int t = 0; t < n; ++t) g(a, mu) += L.inverse(t, a) * j.G_vb_z(t, mu);
    }
  }
  return g;
}

struct Derivative {
  double value, h;
};

// Central first or second s-derivative of l with one Richardson step.
Derivative s_derivative(const FinslerMetric& m, const VariationSpec& v, int order, double h, int panels) {
  auto l = [&](double s) { return variation_length(m, v, s, panels); };
  if (!v.s_grid.empty()) {
    // grid: use the two innermost symmetric steps present in the samples
    std::vector<double> pos;
    for (double s : v.s_grid) {
      if (s > 0) pos.push_back(s);
    }
    std::sort(pos.begin(), pos.end());
    if (pos.empty()) fail(ErrorKind::invalid_argument, "grid variation needs s samples on both sides of 0");
    const double h1 = pos[0];
    const bool two = pos.size() >= 2 && std::abs(pos[1] - 2 * h1) < 1e-9 * h1;
    const double l0 = order == 2 ? l(0.0) : 0.0;
    auto D = [&](double k) {
      return order == 1 ? (l(k) - l(-k)) / (2 * k) : (l(k) - 2 * l0 + l(-k)) / (k * k);
    };
    if (!two) return {D(h1), h1};
    return {(4 * D(h1) - D(2 * h1)) / 3, h1};
  }
  if (-h < v.s_min || h > v.s_max) fail(ErrorKind::invalid_argument, "difference step exceeds the variation s-range");
  const double l0 = order == 2 ? l(0.0) : 0.0;
  auto D = [&](double k) {
    return order == 1 ? (l(k) - l(-k)) / (2 * k) : (l(k) - 2 * l0 + l(-k)) / (k * k);
  };
  return {(4 * D(0.5 * h) - D(h)) / 3, h};
}

double u_scale(const VariationSpec& v, const std::vector<Node>& nodes) {
  double s = 0;
  for (const Node& nd : nodes) s = std::max(s, v.U(nd.t).norm());
  return s;
}

}  // namespace

BaseCurve line_curve(const CVector& p, const CVector& d, double a, double b) {
  return {[p, d](double t) -> CVector { return p + t * d; }, [d](double) -> CVector { return d; },
          [d](double) -> CVector { return CVector::Zero(d.size()); }, a, b};
}

BaseCurve tanh_curve(const CVector& u, double a, double b) {
  return {[u](double t) -> CVector { return std::tanh(t) * u; },
          [u](double t) -> CVector {
            const double c = std::cosh(t);
            return u / (c * c);
          },
          [u](double t) -> CVector {
            const double c = std::cosh(t);
            return -2.0 * std::tanh(t) / (c * c) * u;
          },
          a, b};
}

BaseCurve geodesic_curve(const FinslerMetric& m, const CVector& p, const CVector& v, double T,
                         const GeodesicOptions& opts) {
  GeodesicPath path = integrate_geodesic(m, p, v, T, opts);
  if (path.hit_boundary) fail(ErrorKind::domain_error, "geodesic leaves the domain before T");
  auto shared = std::make_shared<GeodesicPath>(std::move(path));
  const double tol = std::min(1e-11, opts.tol);
  return {[m, shared, tol](double t) -> CVector { return path_state_at(m, *shared, t, tol).sigma; },
          [m, shared, tol](double t) -> CVector { return path_state_at(m, *shared, t, tol).velocity; },
          [m, shared, tol](double t) -> CVector {
            const GeodesicState st = path_state_at(m, *shared, t, tol);
            return geodesic_acceleration(m, st.sigma, st.velocity);
          },
          0.0, T};
}

BumpKind bump_kind_from_string(const std::string& s) {
  if (s == "sine") return BumpKind::sine;
  if (s == "polynomial" || s == "poly") return BumpKind::polynomial;
  if (s == "linear") return BumpKind::linear;
  fail(ErrorKind::invalid_argument, "unknown bump kind '" + s + "' (sine, polynomial, linear)");
}

std::string to_string(BumpKind k) {
  switch (k) {
    case BumpKind::sine:
      return "sine";
    case BumpKind::polynomial:
      return "polynomial";
    case BumpKind::linear:
      return "linear";
  }
  return "sine";
}

VariationSpec bump_variation(const BaseCurve& base, const CVector& w, BumpKind kind) {
  if (!base.position || !base.velocity || !base.acceleration) {
    fail(ErrorKind::invalid_argument, "base curve needs position, velocity and acceleration");
  }
  const double a = base.a, b = base.b, L = b - a;
  if (!(L > 0)) fail(ErrorKind::invalid_argument, "base curve needs a < b");
  auto phi = [=](double t) {
    const double x = (t - a) / L;
    switch (kind) {
      case BumpKind::sine:
        return std::sin(M_PI * x);
      case BumpKind::polynomial:
        return 4 * x * (1 - x);
      case BumpKind::linear:
        return x;
    }
    return 0.0;
  };
  auto dphi = [=](double t) {
    const double x = (t - a) / L;
    switch (kind) {
      case BumpKind::sine:
        return M_PI / L * std::cos(M_PI * x);
      case BumpKind::polynomial:
        return 4 * (1 - 2 * x) / L;
      case BumpKind::linear:
        return 1 / L;
    }
    return 0.0;
  };
  VariationSpec v;
  v.a = a;
  v.b = b;
  v.fixed_endpoints = kind != BumpKind::linear;
  v.position = [base, w, phi](double s, double t) -> CVector { return base.position(t) + s * phi(t) * w; };
  v.velocity = [base, w, dphi](double s, double t) -> CVector { return base.velocity(t) + s * dphi(t) * w; };
  v.base_acceleration = base.acceleration;
  v.U = [w, phi](double t) -> CVector { return phi(t) * w; };
  v.U_dot = [w, dphi](double t) -> CVector { return dphi(t) * w; };
  v.U_s = [w](double) -> CVector { return CVector::Zero(w.size()); };
  return v;
}

VariationSpec grid_variation(const std::vector<double>& s, double a, double b,
                             const std::vector<std::vector<CVector>>& values) {
  using Spline = boost::math::interpolators::cardinal_quintic_b_spline<double>;
  const size_t ns = s.size();
  if (ns < 3 || values.size() != ns) fail(ErrorKind::invalid_argument, "grid needs at least 3 s rows matching values");
  const size_t nt = values[0].size();
  if (nt < 5) fail(ErrorKind::invalid_argument, "grid needs at least 5 t samples");
  const int n = static_cast<int>(values[0][0].size());
  int zero = -1;
  for (size_t i = 0; i < ns; ++i) {
    if (values[i].size() != nt) fail(ErrorKind::invalid_argument, "grid rows must have equal length");
    if (i > 0 && !(s[i] > s[i - 1])) fail(ErrorKind::invalid_argument, "grid s values must increase");
    if (s[i] == 0.0) zero = static_cast<int>(i);
  }
  if (zero < 1 || zero + 1 >= static_cast<int>(ns)) fail(ErrorKind::invalid_argument, "grid s values must bracket 0");
  const double h = s[zero + 1];
  if (std::abs(s[zero - 1] + h) > 1e-12 * h) fail(ErrorKind::invalid_argument, "grid s values must be symmetric about 0");
  const bool wide = zero >= 2 && zero + 2 < static_cast<int>(ns) && std::abs(s[zero + 2] - 2 * h) < 1e-9 * h &&
                    std::abs(s[zero - 2] + 2 * h) < 1e-9 * h;

  // splines[i][2c + part]
  auto splines = std::make_shared<std::vector<std::vector<Spline>>>(ns);
  const double dt = (b - a) / static_cast<double>(nt - 1);
  for (size_t i = 0; i < ns; ++i) {
    for (int c = 0; c < n; ++c) {
      std::vector<double> re(nt), im(nt);
      for (size_t k = 0; k < nt; ++k) {
        if (values[i][k].size() != n) fail(ErrorKind::invalid_argument, "grid entries must have equal dimension");
        re[k] = values[i][k](c).real();
        im[k] = values[i][k](c).imag();
      }
      (*splines)[i].emplace_back(re, a, dt);
      (*splines)[i].emplace_back(im, a, dt);
    }
  }
  auto row = [s](double sv) {
    for (size_t i = 0; i < s.size(); ++i) {
      if (std::abs(s[i] - sv) <= 1e-12 * std::max(1.0, std::abs(sv))) return i;
    }
    fail(ErrorKind::invalid_argument, "grid variation is only known at its s samples");
  };
  // eval(i, t, d): d-th t-derivative of row i
  auto eval = [splines, n](size_t i, double t, int d) {
    CVector r(n);
    for (int c = 0; c < n; ++c) {
      const Spline& re = (*splines)[i][2 * c];
      const Spline& im = (*splines)[i][2 * c + 1];
      if (d == 0) r(c) = cplx(re(t), im(t));
      if (d == 1) r(c) = cplx(re.prime(t), im.prime(t));
      if (d == 2) r(c) = cplx(re.double_prime(t), im.double_prime(t));
    }
    return r;
  };
  const size_t z = static_cast<size_t>(zero);
  auto ds1 = [eval, z, h, wide](double t, int d) -> CVector {
    if (wide) {
      return (-eval(z + 2, t, d) + 8.0 * eval(z + 1, t, d) - 8.0 * eval(z - 1, t, d) + eval(z - 2, t, d)) / (12 * h);
    }
    return (eval(z + 1, t, d) - eval(z - 1, t, d)) / (2 * h);
  };

  VariationSpec v;
  v.a = a;
  v.b = b;
  v.s_min = s.front();
  v.s_max = s.back();
  v.s_grid = s;
  v.position = [eval, row](double sv, double t) { return eval(row(sv), t, 0); };
  v.velocity = [eval, row](double sv, double t) { return eval(row(sv), t, 1); };
  v.base_acceleration = [eval, z](double t) { return eval(z, t, 2); };
  v.U = [ds1](double t) { return ds1(t, 0); };
  v.U_dot = [ds1](double t) { return ds1(t, 1); };
  v.U_s = [eval, z, h](double t) -> CVector {
    return (eval(z + 1, t, 0) - 2.0 * eval(z, t, 0) + eval(z - 1, t, 0)) / (h * h);
  };
  double end_motion = 0;
  for (size_t i = 0; i < ns; ++i) {
    end_motion = std::max({end_motion, (values[i].front() - values[z].front()).norm(),
                           (values[i].back() - values[z].back()).norm()});
  }
  v.fixed_endpoints = end_motion < 1e-12;
  return v;
}

double variation_length(const FinslerMetric& m, const VariationSpec& v, double s, int panels) {
  check_spec(m, v);
  double l = 0;
  for (const Node& nd : quadrature_nodes(v.a, v.b, panels)) {
    const CVector vel = v.velocity(s, nd.t);
    if (vel.norm() <= m.slit_epsilon) {
      fail(ErrorKind::invalid_argument, "variation is not regular at s = " + std::to_string(s) +
                                            ", t = " + std::to_string(nd.t));
    }
    l += nd.w * metric_speed(m, v.position(s, nd.t), vel);
  }
  return l;
}

VariationResult first_variation_check(const FinslerMetric& m, const VariationSpec& v, const VariationOptions& opts) {
  check_spec(m, v);
  const auto nodes = quadrature_nodes(v.a, v.b, opts.panels);
  VariationResult r;
  r.nodes = static_cast<int>(nodes.size());

  auto boundary = [&](double t) {
    const CVector sig = v.position(0.0, t), T = v.velocity(0.0, t);
    const MetricJet j = m.evaluate(FinslerPoint(sig, T), 2);
    return hermitian_form(j.levi(), v.U(t), T).real() / std::sqrt(j.G());
  };
  r.boundary_term = boundary(v.b) - boundary(v.a);

  double integral = 0, F0 = -1, ut_min = INFINITY, ut_max = -INFINITY;
  for (size_t k = 0; k < nodes.size(); ++k) {
    const double t = nodes[k].t;
    const CVector sig = v.position(0.0, t), T = v.velocity(0.0, t), acc = v.base_acceleration(t), U = v.U(t);
    const FinslerPoint p(sig, T);
    const MetricJet j = m.evaluate(p, 2);
    const LeviData L = levi_data(j);
    if (!L.strongly_pseudoconvex) fail(ErrorKind::degenerate_metric, "Levi matrix degenerate along the base curve");
    const CVector nablaT = acc + gamma_semicolon(j, L) * T;
    const double F = std::sqrt(j.G());
    cplx gd(0.0);
    for (int i = 0; i < m.dim(); ++i) gd += j.G_z(i) * T(i) + j.G_v(i) * acc(i);
    const double Fdot = gd.real() / F;
    const double ut = hermitian_form(L.matrix, U, T).real();
    integral += nodes[k].w * (ut * Fdot / (F * F) - hermitian_form(L.matrix, U, nablaT).real() / F);

    if (F0 < 0) F0 = F;
    r.speed_variation = std::max(r.speed_variation, std::abs(F - F0));
    r.geodesic_residual = std::max(r.geodesic_residual, nablaT.norm());
    ut_min = std::min(ut_min, ut);
    ut_max = std::max(ut_max, ut);
    if (k % kGaussOrder == 0) r.kahler_residual = std::max(r.kahler_residual, kahler_residuals(point_geometry(m, p)).weak);
  }
  r.re_ut_variation = ut_max - ut_min;
  r.integral_term = integral;
  r.formula = r.boundary_term + integral;

  const double scale = u_scale(v, nodes);
  if (scale == 0.0) {
    r.numeric = 0;
    r.residual = std::abs(r.formula);
    return r;
  }
  const double h = (opts.h > 0 ? opts.h : 1e-4) / std::max(1.0, scale);
  const Derivative d = s_derivative(m, v, 1, h, opts.panels);
  r.numeric = d.value;
  r.h = d.h;
  r.residual = std::abs(r.formula - r.numeric);
  return r;
}

VariationResult second_variation_check(const FinslerMetric& m, const VariationSpec& v, const VariationOptions& opts) {
  check_spec(m, v);
  if (!v.U_s) fail(ErrorKind::invalid_argument, "second variation needs d^2/ds^2 Sigma");
  const auto nodes = quadrature_nodes(v.a, v.b, opts.panels);
  const int n = m.dim();
  VariationResult r;
  r.nodes = static_cast<int>(nodes.size());

  // base geodesic check first, with the cheap order-2 data
  for (const Node& nd : nodes) {
    const CVector sig = v.position(0.0, nd.t), T = v.velocity(0.0, nd.t);
    const MetricJet j = m.evaluate(FinslerPoint(sig, T), 2);
    const LeviData L = levi_data(j);
    const CVector nablaT = v.base_acceleration(nd.t) + gamma_semicolon(j, L) * T;
    r.geodesic_residual = std::max(r.geodesic_residual, nablaT.norm());
    r.speed_variation = std::max(r.speed_variation, std::abs(std::sqrt(j.G()) - 1.0));
  }
  if (r.geodesic_residual > opts.geodesic_tol) {
    fail(ErrorKind::invalid_argument,
         "base curve is not a geodesic (residual " + std::to_string(r.geodesic_residual) + ")");
  }
  if (r.speed_variation > 1e-6) {
    fail(ErrorKind::invalid_argument,
         "base geodesic is not unit speed (max |F - 1| = " + std::to_string(r.speed_variation) + ")");
  }

  auto nabla_uu = [&](double t) {
    const CVector sig = v.position(0.0, t), T = v.velocity(0.0, t), U = v.U(t);
    const PointGeometry g = point_geometry(m, FinslerPoint(sig, T));
    CVector w = v.U_s(t);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        for (int mu = 0; mu < n; ++mu) w(a) += g.connection.gamma_mixed(a, b, mu) * U(b) * U(mu);
      }
    }
    return hermitian_form(g.levi().matrix, w, T).real();
  };
  r.boundary_term = nabla_uu(v.b) - nabla_uu(v.a);

  double integral = 0, curv = 0, sym = 0, ut_min = INFINITY, ut_max = -INFINITY;
  for (size_t k = 0; k < nodes.size(); ++k) {
    const double t = nodes[k].t;
    const CVector sig = v.position(0.0, t), T = v.velocity(0.0, t), U = v.U(t);
    const CurvatureContext c = curvature_context(m, FinslerPoint(sig, T));
    const ConnectionData& cd = c.geometry.connection;
    CVector nablaU = v.U_dot(t), nablaT = v.base_acceleration(t);
    for (int a = 0; a < n; ++a) {
      for (int mu = 0; mu < n; ++mu) {
        nablaT(a) += cd.gamma_semicolon(a, mu) * T(mu);
        for (int b = 0; b < n; ++b) nablaU(a) += cd.gamma_mixed(a, b, mu) * U(b) * T(mu);
      }
    }
    const double norm2 = c.hermitian(nablaU, nablaU).real();
    const double dut = c.hermitian(nablaU, T).real() + c.hermitian(U, nablaT).real();
    const cplx bracket = c.omega_product(hol_arg(T), antihol_arg(U), U, T) -
                         c.omega_product(hol_arg(U), antihol_arg(T), U, T) +
                         c.symmetric(c.tau_h(hol_arg(U), antihol_arg(T)), U) -
                         c.symmetric(c.tau_h(hol_arg(T), antihol_arg(U)), U);
    integral += nodes[k].w * (norm2 - dut * dut - bracket.real());
    curv += nodes[k].w * bracket.real();
    sym += nodes[k].w * c.symmetric(nablaU, nablaU).real();
    const double ut = c.hermitian(U, T).real();
    ut_min = std::min(ut_min, ut);
    ut_max = std::max(ut_max, ut);
    if (k % kGaussOrder == 0) r.kahler_residual = std::max(r.kahler_residual, kahler_residuals(c.geometry).kahler);
  }
  r.re_ut_variation = ut_max - ut_min;
  r.integral_term = integral;
  r.curvature_term = curv;
  r.symmetric_term = sym;
  r.formula = r.boundary_term + integral;

  const double scale = u_scale(v, nodes);
  if (scale == 0.0) {
    r.numeric = 0;
    r.residual = std::abs(r.formula);
    return r;
  }
  const double h = (opts.h > 0 ? opts.h : 1e-3) / std::max(1.0, scale);
  const Derivative d = s_derivative(m, v, 2, h, opts.panels);
  r.numeric = d.value;
  r.h = d.h;
  r.residual = std::abs(r.formula - r.numeric);
  return r;
}

}  // namespace finsler
