#include "finsler/torsion.hpp"

#include <cmath>

#include "finsler/errors.hpp"
#include "finsler/forms.hpp"

namespace finsler {

TorsionData torsion_components(const ConnectionData& c, const DeltaDerivatives& d) {
  const int n = c.gamma_semicolon.dim();
  TorsionData t{Tensor(n, 3), Tensor(n, 3), Tensor(n, 3), Tensor(n, 3)};
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int m = 0; m < n; ++m) {
        t.theta_horizontal(a, b, m) = 0.5 * (c.gamma_mixed(a, b, m) - c.gamma_mixed(a, m, b));
        t.theta_mixed(a, b, m) = c.gamma_vertical(a, b, m);
        t.tau_zzbar(a, b, m) = -d.delta_a(a, b, m);
        t.tau_zpsibar(a, b, m) = -d.gamma_bar(a, b, m);
      }
    }
  }
  return t;
}

CVector theta_contract(const TorsionData& t, const TangentVector& X, const TangentVector& Y) {
  const int n = t.theta_horizontal.dim();
  if (X.horizontal.size() != n || Y.horizontal.size() != n) {
    fail(ErrorKind::invalid_argument, "theta_contract: vector dimension mismatch");
  }
  const bool xv = X.vertical.size() == n, yv = Y.vertical.size() == n;
  CVector r = CVector::Zero(n);
  for (int m = 0; m < n; ++m) {
    cplx s(0.0);
    for (int nu = 0; nu < n; ++nu) {
      for (int k = 0; k < n; ++k) {
        // (dz^k ^ dz^nu)(X, Y) = X^k Y^nu - Y^k X^nu
        s += t.theta_horizontal(m, nu, k) *
             (X.horizontal(k) * Y.horizontal(nu) - Y.horizontal(k) * X.horizontal(nu));
        // (psi^k ^ dz^nu)(X, Y) = Xv^k Y^nu - Yv^k X^nu
        cplx pv(0.0);
        if (xv) pv += X.vertical(k) * Y.horizontal(nu);
        if (yv) pv -= Y.vertical(k) * X.horizontal(nu);
        s += t.theta_mixed(m, nu, k) * pv;
      }
    }
    r(m) = s;
  }
  return r;
}

HorizontalVector theta_contract(const TorsionData& t, const HorizontalVector& H, const HorizontalVector& K) {
  if (!(H.base == K.base)) fail(ErrorKind::invalid_argument, "theta_contract: base points differ");
  return {H.base, theta_contract(t, TangentVector{H.components, {}}, TangentVector{K.components, {}})};
}

double theta_dot_residual(const PointGeometry& g) {
  const int n = g.dim();
  FrameCalculus fc(g.jets);
  uint32_t holo = 0;
  for (int k = 0; k < n; ++k) holo |= (1u << slot_dz(n, k)) | (1u << slot_psi(n, k));
  double r = 0.0;
  for (int a = 0; a < n; ++a) {
    Form td = fc.dpsi(a).restricted(holo);
    for (int b = 0; b < n; ++b) td -= wedge(fc.one(slot_psi(n, b)), fc.omega(a, b));
    r = std::max(r, td.max_abs());
  }
  return r;
}

KahlerResiduals kahler_residuals(const PointGeometry& g) {
  const int n = g.dim();
  const ConnectionData& c = g.connection;
  const MetricJet& j = g.metric();
  const CVector& v = g.point().v;
  KahlerResiduals k;
  double coef = 0.0, contracted = 0.0, paired = 0.0, levi = 0.0;
  for (int a = 0; a < n; ++a) {
    for (int m = 0; m < n; ++m) {
      cplx kc(0.0), left(0.0), right(0.0);
      for (int nu = 0; nu < n; ++nu) {
        coef = std::max(coef, std::abs(c.gamma_mixed(a, m, nu)));
        k.strong_raw = std::max(k.strong_raw, std::abs(c.gamma_mixed(a, m, nu) - c.gamma_mixed(a, nu, m)));
        left += c.gamma_mixed(a, nu, m) * v(nu);
        right += c.gamma_mixed(a, m, nu) * v(nu);
      }
      kc = left - right;
      contracted = std::max({contracted, std::abs(left), std::abs(right)});
      k.kahler_raw = std::max(k.kahler_raw, std::abs(kc));
    }
  }
  for (int m = 0; m < n; ++m) {
    cplx w(0.0), left(0.0), right(0.0);
    for (int a = 0; a < n; ++a) {
      for (int nu = 0; nu < n; ++nu) {
        left += j.G_v(a) * c.gamma_mixed(a, nu, m) * v(nu);
        right += j.G_v(a) * c.gamma_mixed(a, m, nu) * v(nu);
      }
    }
    w = left - right;
    paired = std::max({paired, std::abs(left), std::abs(right)});
    k.weak_raw = std::max(k.weak_raw, std::abs(w));
  }
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      levi = std::max(levi, std::abs(j.G_vvb(a, b)));
      for (int d = 0; d < n; ++d) {
        k.hermitian_raw = std::max(k.hermitian_raw, std::abs(j.G_vvbv(a, b, d)));
        k.mixed_torsion = std::max(k.mixed_torsion, std::abs(c.gamma_vertical(a, b, d)));
      }
    }
  }
  k.strong = k.strong_raw / (1.0 + coef);
  k.kahler = k.kahler_raw / (1.0 + contracted);
  k.weak = k.weak_raw / (1.0 + paired);
  k.hermitian = k.hermitian_raw / (1.0 + levi);
  return k;
}

double default_kahler_tolerance(const FinslerMetric& m) { return m.has_analytic() ? 1e-8 : 1e-6; }

KahlerReport kahler_classify(const FinslerMetric& m, const std::vector<FinslerPoint>& samples, double tol) {
  if (!(tol > 0.0)) fail(ErrorKind::invalid_argument, "tolerance must be positive");
  KahlerReport r;
  r.tol = tol;
  for (size_t i = 0; i < samples.size(); ++i) {
    KahlerResiduals k;
    try {
      k = kahler_residuals(point_geometry(m, samples[i]));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::degenerate_metric || e.kind() == ErrorKind::domain_error ||
          e.kind() == ErrorKind::not_a_metric || e.kind() == ErrorKind::singular_evaluation) {
        r.excluded.push_back({static_cast<int>(i), e.what()});
        continue;
      }
      throw;
    }
    ++r.samples;
    const int idx = static_cast<int>(i);
    auto track = [idx](double value, double& best, int& where) {
      if (where < 0 || value > best) {
        best = value;
        where = idx;
      }
    };
    track(k.strong, r.max.strong, r.worst_strong);
    track(k.kahler, r.max.kahler, r.worst_kahler);
    track(k.weak, r.max.weak, r.worst_weak);
    track(k.hermitian, r.max.hermitian, r.worst_hermitian);
    r.max.strong_raw = std::max(r.max.strong_raw, k.strong_raw);
    r.max.kahler_raw = std::max(r.max.kahler_raw, k.kahler_raw);
    r.max.weak_raw = std::max(r.max.weak_raw, k.weak_raw);
    r.max.hermitian_raw = std::max(r.max.hermitian_raw, k.hermitian_raw);
    r.max.mixed_torsion = std::max(r.max.mixed_torsion, k.mixed_torsion);
  }
  if (r.samples == 0) fail(ErrorKind::degenerate_metric, "no usable samples for classification");
  r.strongly_kahler = r.max.strong < tol;
  r.kahler = r.max.kahler < tol;
  r.weakly_kahler = r.max.weak < tol;
  r.hermitian = r.max.hermitian < tol;
  return r;
}

}  // namespace finsler
