#include <gtest/gtest.h>

#include "finsler/connection.hpp"
#include "finsler/dsl.hpp"
#include "finsler/errors.hpp"
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
          hermitian_pair(), dsl_metric("(abs2(v1)^2 + abs2(v2)^2)^0.5*(1 + 0.2*re(z1))", 2)};
}

}  // namespace

TEST(Connection, EuclideanVanishes) {
  for (int n = 1; n <= 3; ++n) {
    for (const FinslerPoint& p : random_points(n, 5, 2)) {
      const PointGeometry g = point_geometry(euclidean_metric(n), p);
      EXPECT_LT(g.connection.gamma_semicolon.max_abs(), 1e-12);
      EXPECT_LT(g.connection.gamma_mixed.max_abs(), 1e-12);
      EXPECT_LT(g.connection.gamma_vertical.max_abs(), 1e-12);
      EXPECT_LT(g.deltas.delta_a.max_abs(), 1e-12);
    }
  }
}

TEST(Connection, DiskClosedForm) {
  for (const FinslerMetric& m : {poincare_ball_metric(1), poincare_ball_metric(1).jets_only()}) {
    const PointGeometry g = point_geometry(m, FinslerPoint({0.5}, {1.0}));
    EXPECT_NEAR(std::abs(g.connection.gamma_semicolon(0, 0) - 4.0 / 3), 0, 1e-12);
    EXPECT_NEAR(std::abs(g.connection.gamma_mixed(0, 0, 0) - 4.0 / 3), 0, 1e-12);
    EXPECT_NEAR(std::abs(g.connection.gamma_vertical(0, 0, 0)), 0, 1e-12);
    // delta_1bar(Gamma^1_{;1}) = 2 v / (1 - |z|^2)^2
    EXPECT_NEAR(std::abs(g.deltas.delta_a(0, 0, 0) - 32.0 / 9), 0, 1e-11);
  }
}

TEST(Connection, HermitianFieldHasNoVerticalPart) {
  const FinslerMetric m = hermitian_pair();
  for (const FinslerPoint& p : random_points(2, 10, 8)) {
    EXPECT_LT(point_geometry(m, p).connection.gamma_vertical.max_abs(), 1e-10);
  }
}

TEST(Connection, HorizontalFrameResidualsOnFiftyPoints) {
  for (const FinslerMetric& m : all_metrics()) {
    for (const FinslerPoint& p : random_points(m.dim(), 50, 29, 0.6)) {
      const ResidualSet r = horizontal_frame_residuals(point_geometry(m, p));
      for (const char* k : {"delta_G", "delta_bar_G_a", "delta_commutation", "mixed_gamma_routes"}) {
        EXPECT_LT(r.get(k), 1e-8) << m.name() << " " << k;
      }
    }
  }
}

TEST(Connection, DeltaSymmetryOnLp) {
  for (const FinslerPoint& p : random_points(2, 20, 31)) {
    const PointGeometry g = point_geometry(lp_finsler_metric(2, 4), p);
    double r = 0;
    for (int a = 0; a < 2; ++a) {
      for (int m = 0; m < 2; ++m) {
        for (int n = 0; n < 2; ++n) r = std::max(r, std::abs(g.deltas.delta_h(a, m, n) - g.deltas.delta_h(a, n, m)));
      }
    }
    EXPECT_LT(r, 1e-8);
  }
}

TEST(Connection, InvariantResiduals) {
  for (const FinslerMetric& m : all_metrics()) {
    for (const FinslerPoint& p : random_points(m.dim(), 10, 37, 0.6)) {
      EXPECT_LT(connection_invariant_residuals(point_geometry(m, p)).max(), 1e-9) << m.name();
    }
  }
}

TEST(Connection, DegenerateLevi) {
  try {
    point_geometry(dsl_metric("abs2(v1 + v2)", 2), FinslerPoint({0.0, 0.0}, {1.0, 0.5}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::degenerate_metric);
  }
}

TEST(RadialFields, Components) {
  EXPECT_EQ(radial_fields(FinslerPoint({0.0}, {1.0})).chi.components(0), cplx(1.0));
  const RadialFields r = radial_fields(FinslerPoint({0.0, 0.0}, {2.0, cplx(0, 3)}));
  EXPECT_EQ(r.chi.components(1), cplx(0, 3));
  EXPECT_EQ(r.iota(0), cplx(2.0));
}

TEST(FiberProducts, Examples) {
  const FinslerPoint e({0.0, 0.0}, {1.0, 0.0});
  const MetricJet je = euclidean_metric(2).evaluate(e, 2);
  const HorizontalVector H{e, CVector::Unit(2, 0)};
  const FiberProducts f = fiber_products(je, H, H);
  EXPECT_NEAR(std::abs(f.hermitian - 1.0), 0, 1e-15);
  EXPECT_NEAR(std::abs(f.symmetric), 0, 1e-15);

  const FinslerPoint d({0.5}, {1.0});
  const HorizontalVector Hd{d, CVector::Ones(1)};
  EXPECT_NEAR(std::abs(fiber_products(poincare_ball_metric(1).evaluate(d, 2), Hd, Hd).hermitian - 16.0 / 9), 0, 1e-14);
  const HorizontalVector other{FinslerPoint({0.1}, {1.0}), CVector::Ones(1)};
  EXPECT_THROW(fiber_products(poincare_ball_metric(1).evaluate(d, 2), Hd, other), Error);
}

TEST(FiberProducts, RadialIdentities) {
  Rng rng(5);
  for (const FinslerMetric& m : all_metrics()) {
    for (const FinslerPoint& p : random_points(m.dim(), 20, 43, 0.6)) {
      const MetricJet j = m.evaluate(p, 3);
      const HorizontalVector chi = radial_fields(p).chi;
      EXPECT_NEAR(fiber_products(j, chi, chi).hermitian.real(), j.G(), 1e-12 * (1 + j.G()));
      const CVector H = rng.complex_normal(m.dim());
      EXPECT_LT(std::abs(symmetric_product(j, H, p.v)), 1e-9 * (1 + j.G())) << m.name();
    }
  }
}
