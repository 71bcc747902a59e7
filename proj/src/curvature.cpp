#include "finsler/curvature.hpp"

#include <cmath>

#include "finsler/errors.hpp"

namespace finsler {

CurvatureBlocks curvature_blocks(const ConnectionData& c, const DeltaDerivatives& d) {
  const int n = c.gamma_semicolon.dim();
  CurvatureBlocks b{Tensor(n, 4), Tensor(n, 4), Tensor(n, 4), Tensor(n, 4)};
  for (int a = 0; a < n; ++a) {
    for (int be = 0; be < n; ++be) {
      for (int m = 0; m < n; ++m) {
        for (int k = 0; k < n; ++k) {
          cplx hh = -d.delta_mixed_a(a, be, m, k);
          cplx hv = -d.vdot_mixed_a(a, be, m, k);
          for (int s = 0; s < n; ++s) {
            hh -= c.gamma_vertical(a, be, s) * d.delta_a(s, m, k);
            hv -= c.gamma_vertical(a, be, s) * d.gamma_bar(s, k, m);
          }
          b.R_hh(a, be, m, k) = hh;
          b.R_hv(a, be, k, m) = hv;
          b.R_vh(a, be, m, k) = -d.delta_vert_a(a, be, m, k);
          b.R_vv(a, be, m, k) = -d.vdot_vert_a(a, be, m, k);
        }
      }
    }
  }
  return b;
}

FormArgument hol_arg(const CVector& H) { return {H, CVector::Zero(H.size())}; }
FormArgument antihol_arg(const CVector& K) { return {CVector::Zero(K.size()), K.conjugate()}; }

CMatrix omega(const CurvatureBlocks& b, const FormArgument& X, const FormArgument& Y) {
  const int n = b.R_hh.dim();
  CMatrix w = CMatrix::Zero(n, n);
  for (int m = 0; m < n; ++m) {
    for (int k = 0; k < n; ++k) {
      // (dz^m ^ dzbar^k)(X, Y)
      const cplx e = X.hol(m) * Y.antihol(k) - Y.hol(m) * X.antihol(k);
      if (e == cplx(0.0)) continue;
      for (int a = 0; a < n; ++a) {
        for (int be = 0; be < n; ++be) w(a, be) += b.R_hh(a, be, m, k) * e;
      }
    }
  }
  return w;
}

cplx CurvatureContext::hermitian(const CVector& H, const CVector& K) const {
  return hermitian_form(levi(), H, K);
}

cplx CurvatureContext::symmetric(const CVector& H, const CVector& K) const {
  return symmetric_product(geometry.metric(), H, K);
}

cplx CurvatureContext::omega_product(const FormArgument& X, const FormArgument& Y, const CVector& L,
                                     const CVector& M) const {
  return hermitian(omega(blocks, X, Y) * L, M);
}

CVector CurvatureContext::tau_h(const FormArgument& X, const FormArgument& Y) const {
  return omega(blocks, X, Y) * chi();
}

CurvatureContext curvature_context(const FinslerMetric& m, const FinslerPoint& p) {
  CurvatureContext c;
  c.geometry = point_geometry(m, p);
  c.blocks = curvature_blocks(c.geometry.connection, c.geometry.deltas);
  return c;
}

cplx horizontal_curvature_tensor(const CurvatureBlocks& b, const LeviData& L, const CVector& H,
                                 const CVector& K, const CVector& Lv, const CVector& M) {
  const int n = b.R_hh.dim();
  cplx s(0.0);
  for (int sg = 0; sg < n; ++sg) {
    for (int be = 0; be < n; ++be) {
      const cplx g = L.matrix(sg, be) * std::conj(M(be));
      for (int a = 0; a < n; ++a) {
        for (int m = 0; m < n; ++m) {
          for (int k = 0; k < n; ++k) {
            s += g * b.R_hh(sg, a, m, k) * H(m) * std::conj(K(k)) * Lv(a);
          }
        }
      }
    }
  }
  return s;
}

HolomorphicCurvature holomorphic_curvature_value(const PointGeometry& g) {
  const int n = g.dim();
  const MetricJet& j = g.metric();
  const CVector& v = g.point().v;
  cplx s(0.0);
  for (int a = 0; a < n; ++a) {
    for (int m = 0; m < n; ++m) {
      for (int k = 0; k < n; ++k) s += j.G_v(a) * g.deltas.delta_a(a, m, k) * v(m) * std::conj(v(k));
    }
  }
  const double G = j.G();
  const cplx kf = -2.0 / (G * G) * s;
  return {kf.real(), std::abs(kf.imag())};
}

double holomorphic_curvature(const FinslerMetric& m, const FinslerPoint& p) {
  return holomorphic_curvature_value(point_geometry(m, p)).value;
}

double flag_curvature(const CurvatureContext& c, const CVector& H) {
  const CVector chi = c.chi();
  const cplx t1 = c.omega_product(hol_arg(chi), antihol_arg(H), H, chi);
  const cplx t2 = c.omega_product(hol_arg(H), antihol_arg(chi), H, chi);
  const cplx t3 = c.symmetric(c.tau_h(hol_arg(H), antihol_arg(chi)), H);
  const cplx t4 = c.symmetric(c.tau_h(hol_arg(chi), antihol_arg(H)), H);
  return (t1 - t2 + t3 - t4).real();
}

double flag_curvature(const FinslerMetric& m, const FinslerPoint& p, const HorizontalVector& H) {
  if (!(H.base == p)) fail(ErrorKind::invalid_argument, "flag_curvature: vector is based at another point");
  return flag_curvature(curvature_context(m, p), H.components);
}

CVector project_orthogonal_to_chi(const CurvatureContext& c, const CVector& H) {
  const CVector chi = c.chi();
  return H - (c.hermitian(H, chi) / c.G()) * chi;
}

DrawSet random_draws(int n, int count, uint64_t seed) {
  Rng rng(seed);
  DrawSet d;
  for (int i = 0; i < count; ++i) {
    d.H.push_back(rng.complex_normal(n));
    d.K.push_back(rng.complex_normal(n));
  }
  return d;
}

ResidualSet curvature_symmetry_residuals(const CurvatureContext& c, const DrawSet& draws) {
  const int n = c.dim();
  const LeviData& L = c.geometry.levi();
  auto R = [&](const CVector& a, const CVector& b, const CVector& l, const CVector& m) {
    return horizontal_curvature_tensor(c.blocks, L, a, b, l, m);
  };
  double quat = 0, cin = 0, sei = 0, holo = 0;
  const size_t N = draws.H.size();
  for (size_t i = 0; i < N; ++i) {
    const CVector& H = draws.H[i];
    const CVector& K = draws.K[i];
    const CVector& Lv = draws.H[(i + 1) % N];
    const CVector& M = draws.K[(i + 1) % N];
    const cplx base = R(H, K, Lv, M);
    // R(Kbar, H, L, Mbar) through the 2-form with swapped arguments
    const cplx swapped = c.omega_product(antihol_arg(K), hol_arg(H), Lv, M);
    quat = std::max(quat, std::abs(swapped + base));
    cin = std::max(cin, std::abs(R(K, H, M, Lv) - std::conj(base)));
    sei = std::max({sei, std::abs(R(Lv, K, H, M) - base), std::abs(R(H, M, Lv, K) - base)});
  }
  double dbar_theta = 0;
  for (int a = 0; a < n; ++a) {
    for (int s = 0; s < n; ++s) {
      for (int m = 0; m < n; ++m) {
        for (int k = 0; k < n; ++k) {
          dbar_theta = std::max(dbar_theta, std::abs(c.blocks.R_hh(a, s, m, k) - c.blocks.R_hh(a, m, s, k)));
        }
      }
    }
  }
  const CVector chi = c.chi();
  const HolomorphicCurvature kf = holomorphic_curvature_value(c.geometry);
  const double G = c.G();
  holo = std::abs(kf.value - 2.0 / (G * G) * R(chi, chi, chi, chi).real());
  ResidualSet r;
  r.set("antisymmetry", quat);
  r.set("conjugate_symmetry", cin);
  r.set("pair_symmetry", sei);
  r.set("dbar_theta", dbar_theta);
  r.set("holomorphic_two_routes", holo);
  r.set("holomorphic_imaginary", kf.imaginary);
  return r;
}

ResidualSet block_symmetry_residuals(const CurvatureBlocks& b) {
  const int n = b.R_hh.dim();
  double vh = 0, vv = 0;
  for (int a = 0; a < n; ++a) {
    for (int be = 0; be < n; ++be) {
      for (int d = 0; d < n; ++d) {
        for (int k = 0; k < n; ++k) {
          vh = std::max(vh, std::abs(b.R_vh(a, be, d, k) - b.R_vh(a, d, be, k)));
          vv = std::max(vv, std::abs(b.R_vv(a, be, d, k) - b.R_vv(a, d, be, k)));
        }
      }
    }
  }
  ResidualSet r;
  r.set("R_vh_symmetry", vh);
  r.set("R_vv_symmetry", vv);
  return r;
}

double tau_contraction_residual(const CurvatureContext& c) {
  const int n = c.dim();
  const CVector& v = c.point().v;
  const CurvatureBlocks& b = c.blocks;
  const DeltaDerivatives& d = c.geometry.deltas;
  double r = 0;
  for (int a = 0; a < n; ++a) {
    for (int x = 0; x < n; ++x) {
      for (int y = 0; y < n; ++y) {
        cplx hh(0.0), vh(0.0), hv(0.0), vv(0.0);
        for (int be = 0; be < n; ++be) {
          hh += b.R_hh(a, be, x, y) * v(be);
          vh += b.R_vh(a, be, x, y) * v(be);
          hv += b.R_hv(a, be, x, y) * v(be);
          vv += b.R_vv(a, be, x, y) * v(be);
        }
        r = std::max({r, std::abs(hh + d.delta_a(a, x, y)), std::abs(vh), std::abs(hv + d.gamma_bar(a, x, y)),
                      std::abs(vv)});
      }
    }
  }
  return r;
}

ResidualSet constant_curvature_residuals(const CurvatureContext& c, double cc, const DrawSet& draws) {
  const CVector chi = c.chi();
  const double G = c.G();
  const FormArgument hchi = hol_arg(chi), achi = antihol_arg(chi);
  double chc = 0, star = 0, cuno = 0, hbis = 0, tsu = 0, fine = 0, flag_max = -INFINITY, decomp = 0;
  chc = std::abs(c.omega_product(hchi, achi, chi, chi) - cc * G * G);
  star = (c.tau_h(hchi, achi) - cc * G * chi).cwiseAbs().maxCoeff();
  for (size_t i = 0; i < draws.H.size(); ++i) {
    const CVector& H = draws.H[i];
    const CVector& K = draws.K[i];
    const FormArgument aK = antihol_arg(K);
    const cplx H_chi = c.hermitian(H, chi), chi_K = c.hermitian(chi, K), K_chi = c.hermitian(K, chi);
    const cplx H_K = c.hermitian(H, K);
    cuno = std::max(cuno, std::abs(c.omega_product(hchi, aK, chi, chi) - cc * G * chi_K));
    const cplx hb = c.omega_product(hchi, aK, H, chi);
    hbis = std::max(hbis, std::abs(hb - 0.5 * cc * (H_chi * chi_K + G * H_K)));
    const CVector tK = c.tau_h(hol_arg(K), achi);
    tsu = std::max(tsu, (tK - 0.5 * cc * (K_chi * chi + G * K)).cwiseAbs().maxCoeff());
    const cplx lhs = hb - c.omega_product(hol_arg(H), achi, K, chi) + c.symmetric(H, tK) -
                     c.symmetric(H, c.tau_h(hchi, aK));
    const cplx rhs = 0.5 * cc * (G * (H_K - c.symmetric(H, K)) + H_chi * (chi_K - 2.0 * K_chi));
    fine = std::max(fine, std::abs(lhs.real() - rhs.real()));
    flag_max = std::max(flag_max, flag_curvature(c, H));
    const CVector Hp = project_orthogonal_to_chi(c, H);
    const double zeta = K(0).real();
    decomp = std::max(decomp, std::abs(flag_curvature(c, CVector(zeta * chi + Hp)) - flag_curvature(c, Hp)));
  }
  ResidualSet r;
  r.set("constant_holomorphic", chc);
  r.set("tau_chi_chi", star);
  r.set("omega_chi_k", cuno);
  r.set("omega_chi_k_h", hbis);
  r.set("tau_k_chi", tsu);
  r.set("flag_formula", fine);
  r.set("flag_decomposition", decomp);
  r.set("flag_max", flag_max);
  return r;
}

CurvatureEstimate estimate_constant_curvature(const FinslerMetric& m, const std::vector<FinslerPoint>& pts) {
  CurvatureEstimate e;
  std::vector<double> h;
  for (const auto& p : pts) h.push_back(holomorphic_curvature(m, p) / 2.0);
  e.samples = static_cast<int>(h.size());
  if (e.samples == 0) fail(ErrorKind::invalid_argument, "estimate needs at least one point");
  double sum = 0, sq = 0;
  for (double x : h) sum += x;
  e.c = sum / e.samples;
  for (double x : h) sq += (x - e.c) * (x - e.c);
  e.stddev = std::sqrt(sq / e.samples);
  return e;
}

}  // namespace finsler
