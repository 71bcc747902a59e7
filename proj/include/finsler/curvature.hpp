#pragma once

#include <cstdint>
#include <vector>

#include "finsler/connection.hpp"
#include "finsler/sampling.hpp"

namespace finsler {

struct CurvatureBlocks {
  Tensor R_hh;  // (a, b, m, nu): R^a_{b;m nubar}
  Tensor R_vh;  // (a, b, d, nu): R^a_{bd;nubar}
  Tensor R_hv;  // (a, b, g, m): R^a_{b gbar;m}
  Tensor R_vv;  // (a, b, d, g): R^a_{bd gbar}
};

CurvatureBlocks curvature_blocks(const ConnectionData& c, const DeltaDerivatives& d);

/// Argument of the curvature 2-form: horizontal (1,0) components and the
/// conjugate-frame (0,1) components, i.e. X = X^m delta_m + Y^m delta_mbar.
struct FormArgument {
  CVector hol;
  CVector antihol;
};

/// The (1,0)-vector H.
FormArgument hol_arg(const CVector& H);
/// The (0,1)-vector conj(K).
FormArgument antihol_arg(const CVector& K);

/// Horizontal part of Omega(X, Y) as the endomorphism matrix (a, b) -> Omega^a_b(X, Y).
CMatrix omega(const CurvatureBlocks& b, const FormArgument& X, const FormArgument& Y);

/// Bundles blocks with the point data they are contracted against.
struct CurvatureContext {
  PointGeometry geometry;
  CurvatureBlocks blocks;

  const FinslerPoint& point() const { return geometry.point(); }
  const CMatrix& levi() const { return geometry.levi().matrix; }
  int dim() const { return geometry.dim(); }
  double G() const { return geometry.metric().G(); }
  CVector chi() const { return geometry.point().v; }

  cplx hermitian(const CVector& H, const CVector& K) const;
  cplx symmetric(const CVector& H, const CVector& K) const;
  /// <Omega(X, Y) L, M>
  cplx omega_product(const FormArgument& X, const FormArgument& Y, const CVector& L, const CVector& M) const;
  /// tau^H(X, Y) = Omega(X, Y) chi
  CVector tau_h(const FormArgument& X, const FormArgument& Y) const;
};

CurvatureContext curvature_context(const FinslerMetric& m, const FinslerPoint& p);

/// R(H, conj K, L, conj M) = G_{s bbar} R^s_{a;m nubar} H^m conj(K^nu) L^a conj(M^b)
cplx horizontal_curvature_tensor(const CurvatureBlocks& b, const LeviData& L, const CVector& H,
                                 const CVector& K, const CVector& Lv, const CVector& M);

struct HolomorphicCurvature {
  double value = 0;
  double imaginary = 0;  // imaginary residue of the assembled value
};

/// K_F = -(2/G^2) G_a delta_nubar(Gamma^a_{;m}) v^m conj(v^nu)
HolomorphicCurvature holomorphic_curvature_value(const PointGeometry& g);
double holomorphic_curvature(const FinslerMetric& m, const FinslerPoint& p);

/// Re[<Omega(chi,Hbar)H,chi> - <Omega(H,chibar)H,chi> + <<tau^H(H,chibar),H>> - <<tau^H(chi,Hbar),H>>]
double flag_curvature(const CurvatureContext& c, const CVector& H);
double flag_curvature(const FinslerMetric& m, const FinslerPoint& p, const HorizontalVector& H);

/// Orthogonal projection of H onto the complement of chi for the Levi form.
CVector project_orthogonal_to_chi(const CurvatureContext& c, const CVector& H);

/// Random H, K draws for identity checks; standard complex normal components.
struct DrawSet {
  std::vector<CVector> H, K;
};
DrawSet random_draws(int n, int count, uint64_t seed);

ResidualSet curvature_symmetry_residuals(const CurvatureContext& c, const DrawSet& draws);
ResidualSet block_symmetry_residuals(const CurvatureBlocks& b);
double tau_contraction_residual(const CurvatureContext& c);
ResidualSet constant_curvature_residuals(const CurvatureContext& c, double curvature_c, const DrawSet& draws);

/// Components of D theta - eta^H ^ Omega and D tau - eta^V ^ Omega, plus the
/// agreement of d omega + omega ^ omega with the blocks.
ResidualSet bianchi_residuals(const CurvatureContext& c);
ResidualSet bianchi_residuals(const FinslerMetric& m, const FinslerPoint& p);

struct CurvatureEstimate {
  double c = 0;       // mean of K_F / 2
  double stddev = 0;  // of K_F / 2
  int samples = 0;
};

CurvatureEstimate estimate_constant_curvature(const FinslerMetric& m, const std::vector<FinslerPoint>& pts);

}  // namespace finsler
