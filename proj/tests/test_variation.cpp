#include <gtest/gtest.h>

#include "finsler/dsl.hpp"
#include "finsler/errors.hpp"
#include "finsler/sampling.hpp"
#include "finsler/variation.hpp"

using namespace finsler;

namespace {

CVector c1(cplx a) { return CVector::Constant(1, a); }
CVector c2(cplx a, cplx b) {
  CVector v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST(FirstVariation, EndpointMovingEuclidean) {
  // Sigma(s, t) = t (1 + s), so l(s) = 1 + s
  const VariationSpec v = bump_variation(line_curve(c1(0), c1(1), 0, 1), c1(1), BumpKind::linear);
  EXPECT_FALSE(v.fixed_endpoints);
  EXPECT_NEAR(variation_length(euclidean_metric(1), v, 0.3), 1.3, 1e-12);
  const VariationResult r = first_variation_check(euclidean_metric(1), v);
  EXPECT_NEAR(r.formula, 1.0, 1e-10);
  EXPECT_NEAR(r.numeric, 1.0, 1e-8);
}

TEST(FirstVariation, DiskGeodesicIsCritical) {
  const VariationResult r =
      first_variation_check(poincare_ball_metric(1), bump_variation(tanh_curve(c1(1), 0, 1), c1(cplx(0.3, 0.7)), BumpKind::polynomial));
  EXPECT_LT(std::abs(r.formula), 1e-5);
  EXPECT_LT(std::abs(r.numeric), 1e-5);
}

TEST(FirstVariation, NonGeodesicBases) {
  const FinslerMetric d = poincare_ball_metric(1);
  for (const BaseCurve& base : {line_curve(c1(0), c1(0.8), 0, 1), line_curve(c1(cplx(0, 0.3)), c1(0.6), 0, 1)}) {
    for (BumpKind k : {BumpKind::sine, BumpKind::polynomial, BumpKind::linear}) {
      const VariationResult r = first_variation_check(d, bump_variation(base, c1(cplx(0.3, 0.7)), k));
      EXPECT_LT(r.residual, 1e-4) << to_string(k);
    }
  }
  const VariationResult off = first_variation_check(d, bump_variation(line_curve(c1(cplx(0, 0.3)), c1(0.6), 0, 1),
                                                                      c1(cplx(0.0, 1.0)), BumpKind::sine));
  EXPECT_GT(std::abs(off.formula), 1e-3);
  const FinslerMetric b2 = poincare_ball_metric(2);
  const VariationResult r2 = first_variation_check(
      b2, bump_variation(line_curve(c2(0.1, cplx(0, 0.2)), c2(0.4, cplx(0.3, 0.1)), 0, 1), c2(0.2, cplx(-0.1, 0.3)),
                         BumpKind::sine));
  EXPECT_LT(r2.residual, 1e-4);
}

TEST(FirstVariation, GeodesicCriticality) {
  Rng rng(131);
  for (const FinslerMetric& m : {poincare_ball_metric(2), lp_finsler_metric(2, 4)}) {
    const BaseCurve base = geodesic_curve(m, c2(0.1, 0.2), c2(cplx(0.3, 1), 0.2), 1.0);
    for (int i = 0; i < 5; ++i) {
      const BumpKind k = i % 2 ? BumpKind::polynomial : BumpKind::sine;
      const VariationResult r = first_variation_check(m, bump_variation(base, 0.3 * rng.complex_normal(2), k));
      EXPECT_LT(std::abs(r.numeric), 1e-5) << m.name();
    }
  }
}

TEST(SecondVariation, FlatSineBump) {
  const VariationResult r = second_variation_check(
      euclidean_metric(2), bump_variation(line_curve(c2(0, 0), c2(1, 0), 0, 1), c2(0, 1), BumpKind::sine));
  EXPECT_NEAR(r.formula, M_PI * M_PI / 2, 1e-4);
  EXPECT_NEAR(r.numeric, M_PI * M_PI / 2, 1e-4);
}

TEST(SecondVariation, DiskAndBall) {
  const FinslerMetric d = poincare_ball_metric(1);
  for (BumpKind k : {BumpKind::sine, BumpKind::polynomial}) {
    const VariationResult r = second_variation_check(d, bump_variation(tanh_curve(c1(1), 0, 1), c1(cplx(0.3, 0.7)), k));
    EXPECT_LT(r.residual, 1e-3);
  }
  const FinslerMetric b2 = poincare_ball_metric(2);
  const VariationResult orth = second_variation_check(b2, bump_variation(tanh_curve(c2(1, 0), 0, 1), c2(0, 1), BumpKind::sine));
  EXPECT_LT(orth.residual, 1e-3);
  // negative curvature makes the bracket negative, pushing the value above the flat one
  EXPECT_LT(orth.curvature_term, 0.0);
  EXPECT_GT(orth.formula, M_PI * M_PI / 2);
  const CVector p = c2(0.1, 0.2), v0 = c2(cplx(0.3, 1), 0.2);
  const CVector v = v0 / metric_speed(b2, p, v0);
  const VariationResult geo =
      second_variation_check(b2, bump_variation(geodesic_curve(b2, p, v, 1.0), c2(cplx(0.3, 0.7), -0.4), BumpKind::sine));
  EXPECT_LT(geo.residual, 1e-3);
  EXPECT_NEAR(geo.symmetric_term, 0.0, 1e-12);
}

TEST(SecondVariation, SymmetricTermForNonHermitianMetric) {
  const FinslerMetric m = lp_finsler_metric(2, 4);
  const CVector p = c2(0.1, cplx(0, 0.2)), d0 = c2(0.7, cplx(0.3, 0.1));
  const VariationResult r = second_variation_check(
      m, bump_variation(line_curve(p, d0 / metric_speed(m, p, d0), 0, 1), c2(cplx(0.2, 0.1), cplx(-0.1, 0.3)),
                        BumpKind::sine));
  EXPECT_GT(r.residual, 1e-2);
  EXPECT_LT(std::abs(r.formula + r.symmetric_term - r.numeric), 1e-6);
}

TEST(SecondVariation, RequiresUnitSpeedGeodesic) {
  const FinslerMetric d = poincare_ball_metric(1);
  EXPECT_THROW(second_variation_check(d, bump_variation(line_curve(c1(cplx(0, 0.3)), c1(0.6), 0, 1), c1(1), BumpKind::sine)),
               Error);
  EXPECT_THROW(second_variation_check(euclidean_metric(1), bump_variation(line_curve(c1(0), c1(2), 0, 1), c1(1), BumpKind::sine)),
               Error);
}

TEST(GridVariation, MatchesClosedForm) {
  const FinslerMetric d = poincare_ball_metric(1);
  const BaseCurve base = tanh_curve(c1(1), 0, 1);
  const CVector w = c1(cplx(0.3, 0.7));
  const std::vector<double> s = {-2e-3, -1e-3, 0, 1e-3, 2e-3};
  std::vector<std::vector<CVector>> vals;
  for (double sv : s) {
    std::vector<CVector> row;
    for (int k = 0; k <= 200; ++k) {
      const double t = k / 200.0;
      row.push_back(base.position(t) + sv * std::sin(M_PI * t) * w);
    }
    vals.push_back(row);
  }
  const VariationSpec g = grid_variation(s, 0, 1, vals);
  const VariationResult closed = second_variation_check(d, bump_variation(base, w, BumpKind::sine));
  EXPECT_LT(first_variation_check(d, g).residual, 1e-4);
  const VariationResult r = second_variation_check(d, g);
  EXPECT_LT(r.residual, 1e-3);
  EXPECT_NEAR(r.formula, closed.formula, 1e-4);
}

TEST(BumpKind, Names) {
  for (BumpKind k : {BumpKind::sine, BumpKind::polynomial, BumpKind::linear}) EXPECT_EQ(bump_kind_from_string(to_string(k)), k);
  EXPECT_THROW(bump_kind_from_string("square"), Error);
}
