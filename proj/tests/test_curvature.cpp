#include <gtest/gtest.h>

#include <chrono>

#include "finsler/curvature.hpp"
#include "finsler/dsl.hpp"
#include "finsler/sampling.hpp"
#include "oracle.hpp"

using namespace finsler;

namespace {

FinslerMetric hermitian_pair() {
  std::vector<std::vector<std::string>> g(2, std::vector<std::string>(2));
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) g[a][b] = oracle::kHermitianPairG[a][b];
  }
  return hermitian_field_metric(2, g);
}

std::vector<FinslerMetric> all_metrics() {
  return {euclidean_metric(2), poincare_ball_metric(1), poincare_ball_metric(2), lp_finsler_metric(2, 4),
          hermitian_pair(), dsl_metric("abs2(v1) + (1 + 0.3*re(z1))*abs2(v2)", 2)};
}

double block_max(const CurvatureBlocks& b) {
  return std::max({b.R_hh.max_abs(), b.R_vh.max_abs(), b.R_hv.max_abs(), b.R_vv.max_abs()});
}

}  // namespace

TEST(Blocks, EuclideanVanishes) {
  for (int n = 1; n <= 3; ++n) {
    for (const FinslerPoint& p : random_points(n, 5, 7)) {
      const CurvatureContext c = curvature_context(euclidean_metric(n), p);
      EXPECT_LT(block_max(c.blocks), 1e-12);
      EXPECT_LT(std::abs(holomorphic_curvature(euclidean_metric(n), p)), 1e-12);
    }
  }
}

TEST(Blocks, DiskClosedForm) {
  for (const FinslerMetric& m : {poincare_ball_metric(1), poincare_ball_metric(1).jets_only()}) {
    const CurvatureContext c = curvature_context(m, FinslerPoint({0.5}, {1.0}));
    EXPECT_NEAR(std::abs(c.blocks.R_hh(0, 0, 0, 0) + 32.0 / 9), 0, 1e-10);
    const CVector chi = c.chi();
    EXPECT_NEAR(std::abs(horizontal_curvature_tensor(c.blocks, c.geometry.levi(), chi, chi, chi, chi) + 512.0 / 81), 0,
                1e-9);
  }
}

TEST(Blocks, HermitianFieldHasNoFiberBlocks) {
  for (const FinslerPoint& p : random_points(2, 5, 15)) {
    const CurvatureContext c = curvature_context(hermitian_pair(), p);
    EXPECT_LT(c.blocks.R_vh.max_abs(), 1e-10);
    EXPECT_LT(c.blocks.R_vv.max_abs(), 1e-10);
    EXPECT_GT(c.blocks.R_hh.max_abs(), 1e-3);
  }
}

TEST(HolomorphicCurvature, DiskAndBallGrid) {
  const auto t0 = std::chrono::steady_clock::now();
  for (const FinslerPoint& p : grid_points(1, 10)) {
    EXPECT_NEAR(holomorphic_curvature(poincare_ball_metric(1), p), -4.0, 1e-8);
    EXPECT_NEAR(holomorphic_curvature(poincare_ball_metric(1).jets_only(), p), -4.0, 1e-6);
  }
  for (const FinslerPoint& p : grid_points(2, 10)) {
    EXPECT_NEAR(holomorphic_curvature(poincare_ball_metric(2), p), -4.0, 1e-6);
  }
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 5.0);
}

TEST(HolomorphicCurvature, ProjectiveInvariance) {
  for (const FinslerMetric& m : all_metrics()) {
    for (const FinslerPoint& p : random_points(m.dim(), 20, 53, 0.6)) {
      const double k = holomorphic_curvature(m, p);
      for (cplx zeta : {cplx(2.0), cplx(0.0, 1.0)}) {
        EXPECT_NEAR(holomorphic_curvature(m, FinslerPoint(p.z, zeta * p.v)), k, 1e-8 * (1 + std::abs(k))) << m.name();
      }
    }
  }
}

TEST(FlagCurvature, Examples) {
  Rng rng(61);
  for (const FinslerPoint& p : random_points(2, 5, 67)) {
    const CurvatureContext ball = curvature_context(poincare_ball_metric(2), p);
    EXPECT_NEAR(flag_curvature(ball, ball.chi()), 0.0, 1e-10);
    const CurvatureContext flat = curvature_context(euclidean_metric(2), p);
    EXPECT_NEAR(flag_curvature(flat, rng.complex_normal(2)), 0.0, 1e-14);
  }
  const FinslerPoint p = random_points(2, 1, 71)[0];
  const CurvatureContext c = curvature_context(poincare_ball_metric(2), p);
  for (int i = 0; i < 100; ++i) {
    const CVector H = project_orthogonal_to_chi(c, rng.complex_normal(2));
    EXPECT_LT(std::abs(c.hermitian(H, c.chi())), 1e-12);
    EXPECT_LE(flag_curvature(c, H), 1e-12);
  }
}

TEST(Symmetry, AllMetrics) {
  for (const FinslerMetric& m : all_metrics()) {
    const DrawSet draws = random_draws(m.dim(), 10, 73);
    for (const FinslerPoint& p : random_points(m.dim(), 50, 79, 0.6)) {
      const ResidualSet r = curvature_symmetry_residuals(curvature_context(m, p), draws);
      EXPECT_LT(r.get("antisymmetry"), 1e-9) << m.name();
      EXPECT_LT(r.get("conjugate_symmetry"), 1e-9) << m.name();
      EXPECT_LT(r.get("holomorphic_two_routes"), 1e-9) << m.name();
    }
  }
}

TEST(Symmetry, KahlerGated) {
  const DrawSet draws = random_draws(2, 20, 83);
  for (const FinslerPoint& p : random_points(2, 20, 89)) {
    const ResidualSet r = curvature_symmetry_residuals(curvature_context(poincare_ball_metric(2), p), draws);
    EXPECT_LT(r.get("pair_symmetry"), 1e-8);
    EXPECT_LT(r.get("dbar_theta"), 1e-8);
  }
  // z-dependent non-Kahler g: the obstruction shows up
  const FinslerMetric m = dsl_metric("abs2(v1) + (1 + 0.3*re(z1))*abs2(v2)", 2);
  double worst = 0;
  for (const FinslerPoint& p : random_points(2, 10, 97)) {
    worst = std::max(worst, curvature_symmetry_residuals(curvature_context(m, p), draws).get("dbar_theta"));
  }
  EXPECT_GT(worst, 1e-4);
}

TEST(Symmetry, BlocksAndTauContraction) {
  for (const FinslerMetric& m : all_metrics()) {
    const bool jets = !m.has_analytic() && m.name() != "poincare_ball";
    for (const FinslerPoint& p : random_points(m.dim(), 20, 101, 0.6)) {
      const CurvatureContext c = curvature_context(m, p);
      EXPECT_LT(block_symmetry_residuals(c.blocks).max(), 1e-10) << m.name();
      EXPECT_LT(tau_contraction_residual(c), jets ? 1e-6 : 1e-8) << m.name();
    }
  }
}

TEST(Bianchi, Components) {
  for (const FinslerPoint& p : random_points(2, 4, 103)) {
    EXPECT_EQ(bianchi_residuals(euclidean_metric(2), p).max(), 0.0);
    EXPECT_LT(bianchi_residuals(lp_finsler_metric(2, 4), p).max(), 1e-6);
    EXPECT_LT(bianchi_residuals(poincare_ball_metric(2), p).max(), 1e-6);
    EXPECT_LT(bianchi_residuals(hermitian_pair(), p).max(), 1e-6);
  }
  EXPECT_LT(bianchi_residuals(poincare_ball_metric(1), FinslerPoint({0.5}, {1.0})).max(), 1e-8);
}

TEST(ConstantCurvature, DiskTauChiChi) {
  const CurvatureContext c = curvature_context(poincare_ball_metric(1), FinslerPoint({0.5}, {1.0}));
  const CVector t = c.tau_h(hol_arg(c.chi()), antihol_arg(c.chi()));
  EXPECT_NEAR(std::abs(t(0) + 32.0 / 9), 0, 1e-10);
  EXPECT_LT(constant_curvature_residuals(c, -2.0, random_draws(1, 5, 1)).get("tau_chi_chi"), 1e-8);
}

TEST(ConstantCurvature, Suites) {
  for (const FinslerPoint& p : random_points(2, 5, 107)) {
    const ResidualSet r = constant_curvature_residuals(curvature_context(euclidean_metric(2), p), 0.0, random_draws(2, 5, 2));
    for (const auto& [k, v] : r.entries()) EXPECT_LT(std::abs(v), 1e-12) << k;
  }
  for (int n : {1, 2}) {
    const DrawSet draws = random_draws(n, 20, 109);
    for (const FinslerPoint& p : random_points(n, 20, 113)) {
      const ResidualSet r = constant_curvature_residuals(curvature_context(poincare_ball_metric(n), p), -2.0, draws);
      for (const auto& [k, v] : r.entries()) {
        if (k == "flag_max") {
          EXPECT_LE(v, 1e-8);
        } else {
          EXPECT_LT(v, 1e-6) << k;
        }
      }
    }
  }
}

TEST(ConstantCurvature, Estimate) {
  const CurvatureEstimate e = estimate_constant_curvature(poincare_ball_metric(2), random_points(2, 10, 127));
  EXPECT_NEAR(e.c, -2.0, 1e-8);
  EXPECT_LT(e.stddev, 1e-8);
  EXPECT_EQ(e.samples, 10);
  EXPECT_NEAR(estimate_constant_curvature(lp_finsler_metric(2, 4), random_points(2, 5, 3)).c, 0.0, 1e-10);
}
