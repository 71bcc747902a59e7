#include "finsler/curvature.hpp"
#include "finsler/forms.hpp"

namespace finsler {

namespace {

// Omega^a_b assembled from the four blocks with constant coefficients.
Form curvature_form(const CurvatureContext& c, int a, int b) {
  const int n = c.dim();
  const ComplexJet& G = c.geometry.jets.G();
  auto k = [&](cplx x) { return ComplexJet::constant(G.space_ptr(), 0, JetBasis::wirtinger, x); };
  auto two = [&](int s1, int s2, cplx x) {
    Form f(n);
    if (s1 == s2) return f;
    // coefficient of e_{s1} ^ e_{s2}
    const uint32_t key = (1u << s1) | (1u << s2);
    f.add(key, k(s1 < s2 ? x : -x));
    return f;
  };
  Form w(n);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      w += two(slot_dz(n, x), slot_dzbar(n, y), c.blocks.R_hh(a, b, x, y));
      w += two(slot_psi(n, x), slot_dzbar(n, y), c.blocks.R_vh(a, b, x, y));
      w += two(slot_dz(n, y), slot_psibar(n, x), c.blocks.R_hv(a, b, x, y));
      w += two(slot_psi(n, x), slot_psibar(n, y), c.blocks.R_vv(a, b, x, y));
    }
  }
  return w;
}

}  // namespace

ResidualSet bianchi_residuals(const CurvatureContext& c) {
  const int n = c.dim();
  const ConnectionJets& cj = c.geometry.jets;
  FrameCalculus fc(cj);

  std::vector<Form> Omega(n * n), theta(n, Form(n)), tau(n, Form(n));
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) Omega[a * n + b] = curvature_form(c, a, b);
  }
  for (int a = 0; a < n; ++a) {
    for (int nu = 0; nu < n; ++nu) {
      for (int s = 0; s < n; ++s) {
        const ComplexJet coef = (cj.mixed_at(a, nu, s) - cj.mixed_at(a, s, nu)) * cplx(0.5);
        theta[a] += wedge(fc.one(slot_dz(n, s), coef), fc.one(slot_dz(n, nu)));
        theta[a] += wedge(fc.one(slot_psi(n, s), cj.vertical_at(a, nu, s)), fc.one(slot_dz(n, nu)));
      }
    }
    for (int m = 0; m < n; ++m) {
      for (int nu = 0; nu < n; ++nu) {
        tau[a] -= wedge(fc.one(slot_dz(n, m), cj.delta_bar(nu, cj.gamma_at(a, m))), fc.one(slot_dzbar(n, nu)));
        tau[a] -= wedge(fc.one(slot_dz(n, m), cj.vdot_bar(nu, cj.gamma_at(a, m))), fc.one(slot_psibar(n, nu)));
      }
    }
  }

  double r_theta = 0, r_tau = 0, r_omega = 0;
  for (int a = 0; a < n; ++a) {
    Form dth = fc.d(theta[a]);
    Form dta = fc.d(tau[a]);
    for (int b = 0; b < n; ++b) {
      dth += wedge(fc.omega(a, b), theta[b]);
      dth -= wedge(fc.one(slot_dz(n, b)), Omega[a * n + b]);
      dta += wedge(fc.omega(a, b), tau[b]);
      dta -= wedge(fc.one(slot_psi(n, b)), Omega[a * n + b]);
    }
    r_theta = std::max(r_theta, dth.max_abs());
    r_tau = std::max(r_tau, dta.max_abs());
    for (int b = 0; b < n; ++b) {
      Form w = fc.d(fc.omega(a, b));
      for (int g = 0; g < n; ++g) w += wedge(fc.omega(a, g), fc.omega(g, b));
      w -= Omega[a * n + b];
      r_omega = std::max(r_omega, w.max_abs());
    }
  }
  ResidualSet r;
  r.set("D_theta", r_theta);
  r.set("D_tau", r_tau);
  r.set("curvature_form", r_omega);
  return r;
}

ResidualSet bianchi_residuals(const FinslerMetric& m, const FinslerPoint& p) {
  return bianchi_residuals(curvature_context(m, p));
}

}  // namespace finsler
