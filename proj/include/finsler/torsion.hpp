#pragma once

#include <string>
#include <vector>

#include "finsler/connection.hpp"

namespace finsler {

struct TorsionData {
  Tensor theta_horizontal;  // (m, nu, s): 1/2 (Gamma^m_{nu;s} - Gamma^m_{s;nu}), coefficient of dz^s ^ dz^nu
  Tensor theta_mixed;       // (m, nu, g): Gamma^m_{nu g}, coefficient of psi^g ^ dz^nu
  Tensor tau_zzbar;         // (a, m, nu): -delta_nubar(Gamma^a_{;m}), coefficient of dz^m ^ dzbar^nu
  Tensor tau_zpsibar;       // (a, b, m): -Gamma^a_{bbar;m}, coefficient of dz^m ^ psibar^b
};

TorsionData torsion_components(const ConnectionData& c, const DeltaDerivatives& d);

/// theta(X, Y) for tangent vectors with horizontal and vertical parts.
CVector theta_contract(const TorsionData& t, const TangentVector& X, const TangentVector& Y);
/// theta(H, K) for two horizontal vectors at the same point.
HorizontalVector theta_contract(const TorsionData& t, const HorizontalVector& H, const HorizontalVector& K);

/// Max component of the vertical (2,0)-torsion d'psi^a - psi^b ^ omega^a_b assembled with forms.
double theta_dot_residual(const PointGeometry& g);

/// Pointwise Kahler-type residuals; raw values and values divided by (1 + coefficient scale).
struct KahlerResiduals {
  double strong = 0, kahler = 0, weak = 0, hermitian = 0, mixed_torsion = 0;
  double strong_raw = 0, kahler_raw = 0, weak_raw = 0, hermitian_raw = 0;
};

KahlerResiduals kahler_residuals(const PointGeometry& g);

struct ExcludedSample {
  int index;
  std::string reason;
};

struct KahlerReport {
  int samples = 0;
  double tol = 0;
  KahlerResiduals max;          // maxima over the samples
  int worst_strong = -1, worst_kahler = -1, worst_weak = -1, worst_hermitian = -1;
  bool strongly_kahler = false, kahler = false, weakly_kahler = false, hermitian = false;
  std::vector<ExcludedSample> excluded;
};

/// Default verdict tolerance: 1e-8 with an analytic provider, 1e-6 on the jet path.
double default_kahler_tolerance(const FinslerMetric& m);

KahlerReport kahler_classify(const FinslerMetric& m, const std::vector<FinslerPoint>& samples, double tol);

}  // namespace finsler
