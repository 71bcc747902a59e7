#pragma once

#include <vector>

#include "finsler/jets.hpp"
#include "finsler/metric.hpp"
#include "finsler/point.hpp"

namespace finsler {

/// Chern-Finsler data carried as Wirtinger-slot jets at one point, so that the
/// frame derivations delta_mu, delta_mubar, d/dv^a, d/dvbar^a can be applied to
/// any coefficient by shifting indices.
struct ConnectionJets {
  int n = 0;
  MetricJet metric;
  LeviData levi;
  std::vector<ComplexJet> levi_inv;        // [b*n + a] -> G^{bbar a}, order 2
  std::vector<ComplexJet> gamma;           // [a*n + m] -> Gamma^a_{;m}, order 2
  std::vector<ComplexJet> gamma_conj;      // conjugate jets of gamma
  std::vector<ComplexJet> gamma_mixed;     // [(a*n + b)*n + m] -> Gamma^a_{b;m}, order 1
  std::vector<ComplexJet> gamma_vertical;  // [(a*n + b)*n + c] -> Gamma^a_{bc}, order 1

  const ComplexJet& G() const { return metric.table(); }
  const ComplexJet& gamma_at(int a, int m) const { return gamma[a * n + m]; }
  const ComplexJet& mixed_at(int a, int b, int m) const { return gamma_mixed[(a * n + b) * n + m]; }
  const ComplexJet& vertical_at(int a, int b, int c) const { return gamma_vertical[(a * n + b) * n + c]; }

  /// delta_mu f = d_mu f - Gamma^s_{;mu} d/dv^s f
  ComplexJet delta(int mu, const ComplexJet& f) const;
  /// delta_mubar f = d_mubar f - conj(Gamma^s_{;mu}) d/dvbar^s f
  ComplexJet delta_bar(int mu, const ComplexJet& f) const;
  ComplexJet vdot(int a, const ComplexJet& f) const;
  ComplexJet vdot_bar(int a, const ComplexJet& f) const;

  ComplexJet partial(const ComplexJet& f, Slot s) const { return f.partial(slot_variable(n, s)); }
};

/// Builds the connection jets from an order >= 3 metric jet (order 4 for curvature).
ConnectionJets connection_jets(const MetricJet& j);

struct ConnectionData {
  Tensor gamma_semicolon;  // (a, m): Gamma^a_{;m}
  Tensor gamma_mixed;      // (a, b, m): Gamma^a_{b;m}, definition route
  Tensor gamma_vertical;   // (a, b, c): Gamma^a_{bc}
  Tensor gamma_mixed_dvt;  // (a, b, m): d/dv^b Gamma^a_{;m}
};

struct DeltaDerivatives {
  Tensor delta_h;        // (a, m, n): delta_n(Gamma^a_{;m})
  Tensor delta_a;        // (a, m, n): delta_nbar(Gamma^a_{;m})
  Tensor delta_mixed_a;  // (a, b, m, n): delta_nbar(Gamma^a_{b;m})
  Tensor delta_vert_a;   // (a, b, d, n): delta_nbar(Gamma^a_{bd})
  Tensor gamma_bar;      // (a, b, m): Gamma^a_{bbar;m} = d/dvbar^b Gamma^a_{;m}
  Tensor vdot_vert_a;    // (a, b, d, g): d/dvbar^g Gamma^a_{bd}
  Tensor vdot_mixed_a;   // (a, b, m, g): d/dvbar^g Gamma^a_{b;m}
};

ConnectionData connection_coefficients(const MetricJet& j);
ConnectionData connection_coefficients(const ConnectionJets& cj);
DeltaDerivatives delta_coefficients(const ConnectionJets& cj);
DeltaDerivatives delta_coefficients(const FinslerMetric& m, const FinslerPoint& p);

/// Everything computed once per point and shared by the torsion and curvature code.
struct PointGeometry {
  ConnectionJets jets;
  ConnectionData connection;
  DeltaDerivatives deltas;

  const FinslerPoint& point() const { return jets.metric.point(); }
  const MetricJet& metric() const { return jets.metric; }
  const LeviData& levi() const { return jets.levi; }
  int dim() const { return jets.n; }
};

PointGeometry point_geometry(const FinslerMetric& m, const FinslerPoint& p);

struct RadialFields {
  HorizontalVector chi;  // components v in the delta frame
  CVector iota;          // components v in the vertical frame
};

RadialFields radial_fields(const FinslerPoint& p);

struct FiberProducts {
  cplx hermitian;  // G_{a bbar} H^a conj(K^b)
  cplx symmetric;  // G_{ab} H^a K^b
};

FiberProducts fiber_products(const MetricJet& j, const HorizontalVector& H, const HorizontalVector& K);

/// Symmetric product G_{ab} H^a K^b at the metric jet's point.
cplx symmetric_product(const MetricJet& j, const CVector& H, const CVector& K);
CMatrix fiber_hessian(const MetricJet& j);

/// Horizontal-frame identities and the two routes for Gamma^a_{b;m}.
ResidualSet horizontal_frame_residuals(const PointGeometry& g);
/// Symmetry and contraction identities of the coefficients.
ResidualSet connection_invariant_residuals(const PointGeometry& g);

}  // namespace finsler
