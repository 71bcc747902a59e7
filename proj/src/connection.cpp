#include "finsler/connection.hpp"

#include <cmath>

#include "finsler/errors.hpp"

namespace finsler {

namespace {

double max_abs(const Tensor& t) { return t.max_abs(); }

}  // namespace

ComplexJet ConnectionJets::delta(int mu, const ComplexJet& f) const {
  ComplexJet r = partial(f, Z(mu));
  for (int s = 0; s < n; ++s) r -= gamma_at(s, mu) * partial(f, V(s));
  return r;
}

ComplexJet ConnectionJets::delta_bar(int mu, const ComplexJet& f) const {
  ComplexJet r = partial(f, Zb(mu));
  for (int s = 0; s < n; ++s) r -= gamma_conj[s * n + mu] * partial(f, Vb(s));
  return r;
}

ComplexJet ConnectionJets::vdot(int a, const ComplexJet& f) const { return partial(f, V(a)); }
ComplexJet ConnectionJets::vdot_bar(int a, const ComplexJet& f) const { return partial(f, Vb(a)); }

ConnectionJets connection_jets(const MetricJet& j) {
  if (j.order() < 3) fail(ErrorKind::invalid_argument, "connection needs an order >= 3 metric jet");
  ConnectionJets cj;
  const int n = j.dim();
  cj.n = n;
  cj.metric = j;
  cj.levi = levi_data(j);
  if (!cj.levi.strongly_pseudoconvex) {
    fail(ErrorKind::degenerate_metric, "Levi matrix is not positive definite (min eigenvalue " +
                                           std::to_string(cj.levi.min_eigenvalue) + ")");
  }
  const ComplexJet& G = j.table();
  const int lo = j.order() - 2;
  auto space = G.space_ptr();

  // L(a, b) = G_{a bbar}; inverse by the nilpotent Neumann series around the value.
  std::vector<ComplexJet> E(n * n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      E[a * n + b] = j.partial({V(a), Vb(b)});
      E[a * n + b][0] = 0.0;
    }
  }
  const CMatrix& A0 = cj.levi.inverse;  // A0(b, a) = G^{bbar a}
  auto constant = [&](cplx c) { return ComplexJet::constant(space, lo, JetBasis::wirtinger, c); };
  std::vector<ComplexJet> term(n * n), sum(n * n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      term[r * n + c] = constant(A0(r, c));
      sum[r * n + c] = term[r * n + c];
    }
  }
  for (int k = 1; k <= lo; ++k) {
    // term <- -A0 * E * term
    std::vector<ComplexJet> et(n * n, constant(0.0));
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        for (int m = 0; m < n; ++m) et[r * n + c] += E[r * n + m] * term[m * n + c];
      }
    }
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        ComplexJet acc = constant(0.0);
        for (int m = 0; m < n; ++m) acc += et[m * n + c] * (-A0(r, m));
        term[r * n + c] = acc;
        sum[r * n + c] += acc;
      }
    }
  }
  cj.levi_inv = sum;

  cj.gamma.resize(n * n);
  cj.gamma_conj.resize(n * n);
  for (int a = 0; a < n; ++a) {
    for (int m = 0; m < n; ++m) {
      ComplexJet g = constant(0.0);
      for (int t = 0; t < n; ++t) g += cj.levi_inv[t * n + a] * j.partial({Vb(t), Z(m)});
      cj.gamma[a * n + m] = g;
      cj.gamma_conj[a * n + m] = conj(g);
    }
  }
  const int lo1 = j.order() - 3;
  auto constant1 = [&](cplx c) { return ComplexJet::constant(space, lo1, JetBasis::wirtinger, c); };
  cj.gamma_vertical.resize(n * n * n);
  cj.gamma_mixed.resize(n * n * n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        ComplexJet gv = constant1(0.0);
        ComplexJet gm = constant1(0.0);
        for (int t = 0; t < n; ++t) {
          gv += cj.levi_inv[t * n + a] * j.partial({V(b), Vb(t), V(c)});
          // delta_c(G_{b tbar}) = G_{b tbar;c} - G_{b tbar g} Gamma^g_{;c}
          ComplexJet dg = j.partial({V(b), Vb(t), Z(c)});
          for (int g = 0; g < n; ++g) dg -= j.partial({V(b), Vb(t), V(g)}) * cj.gamma[g * n + c];
          gm += cj.levi_inv[t * n + a] * dg;
        }
        cj.gamma_vertical[(a * n + b) * n + c] = gv;
        cj.gamma_mixed[(a * n + b) * n + c] = gm;
      }
    }
  }
  return cj;
}

ConnectionData connection_coefficients(const ConnectionJets& cj) {
  const int n = cj.n;
  ConnectionData d{Tensor(n, 2), Tensor(n, 3), Tensor(n, 3), Tensor(n, 3)};
  for (int a = 0; a < n; ++a) {
    for (int m = 0; m < n; ++m) d.gamma_semicolon(a, m) = cj.gamma_at(a, m).value();
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        d.gamma_mixed(a, b, c) = cj.mixed_at(a, b, c).value();
        d.gamma_vertical(a, b, c) = cj.vertical_at(a, b, c).value();
        d.gamma_mixed_dvt(a, b, c) = cj.vdot(b, cj.gamma_at(a, c)).value();
      }
    }
  }
  return d;
}

ConnectionData connection_coefficients(const MetricJet& j) {
  return connection_coefficients(connection_jets(j));
}

DeltaDerivatives delta_coefficients(const ConnectionJets& cj) {
  const int n = cj.n;
  if (cj.metric.order() < 4) fail(ErrorKind::invalid_argument, "delta derivatives need an order-4 metric jet");
  DeltaDerivatives d{Tensor(n, 3), Tensor(n, 3), Tensor(n, 4), Tensor(n, 4),
                     Tensor(n, 3), Tensor(n, 4), Tensor(n, 4)};
  for (int a = 0; a < n; ++a) {
    for (int m = 0; m < n; ++m) {
      const ComplexJet& g = cj.gamma_at(a, m);
      for (int k = 0; k < n; ++k) {
        d.delta_h(a, m, k) = cj.delta(k, g).value();
        d.delta_a(a, m, k) = cj.delta_bar(k, g).value();
        d.gamma_bar(a, k, m) = cj.vdot_bar(k, g).value();
      }
    }
    for (int b = 0; b < n; ++b) {
      for (int m = 0; m < n; ++m) {
        const ComplexJet& gm = cj.mixed_at(a, b, m);
        const ComplexJet& gv = cj.vertical_at(a, b, m);
        for (int k = 0; k < n; ++k) {
          d.delta_mixed_a(a, b, m, k) = cj.delta_bar(k, gm).value();
          d.delta_vert_a(a, b, m, k) = cj.delta_bar(k, gv).value();
          d.vdot_mixed_a(a, b, m, k) = cj.vdot_bar(k, gm).value();
          d.vdot_vert_a(a, b, m, k) = cj.vdot_bar(k, gv).value();
        }
      }
    }
  }
  return d;
}

DeltaDerivatives delta_coefficients(const FinslerMetric& m, const FinslerPoint& p) {
  return delta_coefficients(connection_jets(m.evaluate(p, kMaxJetOrder)));
}

PointGeometry point_geometry(const FinslerMetric& m, const FinslerPoint& p) {
  PointGeometry g;
  g.jets = connection_jets(m.evaluate(p, kMaxJetOrder));
  g.connection = connection_coefficients(g.jets);
  g.deltas = delta_coefficients(g.jets);
  return g;
}

RadialFields radial_fields(const FinslerPoint& p) {
  validate_point(p);
  return {HorizontalVector{p, p.v}, p.v};
}

CMatrix fiber_hessian(const MetricJet& j) {
  const int n = j.dim();
  CMatrix h(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) h(a, b) = j.G_vv(a, b);
  }
  return h;
}

cplx symmetric_product(const MetricJet& j, const CVector& H, const CVector& K) {
  return (H.transpose() * fiber_hessian(j) * K)(0, 0);
}

FiberProducts fiber_products(const MetricJet& j, const HorizontalVector& H, const HorizontalVector& K) {
  if (!(H.base == K.base) || !(H.base == j.point())) {
    fail(ErrorKind::invalid_argument, "fiber products need vectors at the metric jet's point");
  }
  return {hermitian_form(j.levi(), H.components, K.components),
          symmetric_product(j, H.components, K.components)};
}

ResidualSet horizontal_frame_residuals(const PointGeometry& g) {
  const int n = g.dim();
  const MetricJet& j = g.metric();
  const Tensor& gs = g.connection.gamma_semicolon;
  double r_dg = 0, r_dbar = 0, r_comm = 0, r_dvt = 0;
  for (int m = 0; m < n; ++m) {
    cplx s = j.G_z(m);
    for (int k = 0; k < n; ++k) s -= gs(k, m) * j.G_v(k);
    r_dg = std::max(r_dg, std::abs(s));
    for (int a = 0; a < n; ++a) {
      // delta_mbar(G_a) = G_{a;mbar} - conj(Gamma^t_{;m}) G_{a tbar}
      cplx t = j.d({V(a), Zb(m)});
      for (int k = 0; k < n; ++k) t -= std::conj(gs(k, m)) * j.G_vvb(a, k);
      r_dbar = std::max(r_dbar, std::abs(t));
      for (int k = 0; k < n; ++k) {
        r_comm = std::max(r_comm, std::abs(g.deltas.delta_h(a, m, k) - g.deltas.delta_h(a, k, m)));
        r_dvt = std::max(r_dvt, std::abs(g.connection.gamma_mixed(a, k, m) -
                                         g.connection.gamma_mixed_dvt(a, k, m)));
      }
    }
  }
  ResidualSet r;
  r.set("delta_G", r_dg);
  r.set("delta_bar_G_a", r_dbar);
  r.set("delta_commutation", r_comm);
  r.set("mixed_gamma_routes", r_dvt);
  return r;
}

ResidualSet connection_invariant_residuals(const PointGeometry& g) {
  const int n = g.dim();
  const CVector& v = g.point().v;
  const ConnectionData& c = g.connection;
  double sym = 0, contr_mixed = 0, contr_vert = 0;
  for (int a = 0; a < n; ++a) {
    for (int m = 0; m < n; ++m) {
      cplx s(0.0), t(0.0);
      for (int b = 0; b < n; ++b) {
        s += c.gamma_mixed(a, b, m) * v(b);
        t += c.gamma_vertical(a, b, m) * v(b);
        sym = std::max(sym, std::abs(c.gamma_vertical(a, b, m) - c.gamma_vertical(a, m, b)));
      }
      contr_mixed = std::max(contr_mixed, std::abs(s - c.gamma_semicolon(a, m)));
      contr_vert = std::max(contr_vert, std::abs(t));
    }
  }
  ResidualSet r;
  r.set("vertical_symmetry", sym);
  r.set("mixed_contraction", contr_mixed);
  r.set("vertical_contraction", contr_vert);
  (void)max_abs;
  return r;
}

}  // namespace finsler
