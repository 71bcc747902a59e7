#include <gtest/gtest.h>

#include "finsler/dsl.hpp"
#include "finsler/errors.hpp"
#include "finsler/geodesics.hpp"
#include "finsler/sampling.hpp"

using namespace finsler;

namespace {

CVector vec(std::initializer_list<cplx> xs) {
  CVector v(static_cast<int>(xs.size()));
  int i = 0;
  for (cplx x : xs) v(i++) = x;
  return v;
}

}  // namespace

TEST(Acceleration, Examples) {
  EXPECT_EQ(geodesic_acceleration(euclidean_metric(2), vec({0.1, 0.2}), vec({1.0, cplx(0, 1)})).norm(), 0.0);
  EXPECT_NEAR(std::abs(geodesic_acceleration(poincare_ball_metric(1), vec({0.5}), vec({1.0}))(0) + 4.0 / 3), 0, 1e-12);
  // sigma = tanh t solves sigma'' + 2 sigma'^2 conj(sigma) / (1 - |sigma|^2) = 0
  for (double t : {0.1, 0.7, 1.5}) {
    const double s = std::tanh(t), ds = 1 - s * s, dds = -2 * s * ds;
    const CVector a = geodesic_acceleration(poincare_ball_metric(1), vec({s}), vec({ds}));
    EXPECT_NEAR(a(0).real(), dds, 1e-12);
    EXPECT_NEAR(dds + 2 * ds * ds * s / (1 - s * s), 0, 1e-12);
  }
}

TEST(Integrate, EuclideanStraightLines) {
  for (int n = 1; n <= 3; ++n) {
    Rng rng(n);
    const CVector p = rng.complex_normal(n), v = rng.complex_normal(n);
    const GeodesicPath path = integrate_geodesic(euclidean_metric(n), p, v, 2.0);
    EXPECT_LT((path.back().sigma - (p + 2.0 * v)).norm(), 1e-10);
    EXPECT_EQ(path.kind, "geodesic");
  }
  EXPECT_NEAR(std::abs(integrate_geodesic(euclidean_metric(1), vec({0.0}), vec({1.0}), 2.0).back().sigma(0) - 2.0), 0,
              1e-12);
}

TEST(Integrate, DiskTanh) {
  const FinslerMetric d = poincare_ball_metric(1);
  for (double T : {1.0, 3.0}) {
    const GeodesicPath path = integrate_geodesic(d, vec({0.0}), vec({1.0}), T);
    EXPECT_NEAR(std::abs(path.back().sigma(0) - std::tanh(T)), 0, 1e-6);
    EXPECT_LT(path.speed_drift(), 1e-8);
    EXPECT_FALSE(path.hit_boundary);
  }
  EXPECT_NEAR(integrate_geodesic(d, vec({0.0}), vec({1.0}), 1.0).back().sigma(0).real(), 0.761594, 1e-6);
  EXPECT_NEAR(integrate_geodesic(d, vec({0.0}), vec({1.0}), 3.0).back().sigma(0).real(), 0.995055, 1e-6);
}

TEST(Integrate, SpeedDrift) {
  for (const FinslerMetric& m : {poincare_ball_metric(2), lp_finsler_metric(2, 4)}) {
    const GeodesicPath path = integrate_geodesic(m, vec({0.1, cplx(0.2, 0.1)}), vec({cplx(0.3, 1), cplx(-0.5, 0.2)}), 2.0);
    EXPECT_LT(path.speed_drift(), 1e-8) << m.name();
    EXPECT_EQ(path.kind, "geodesic");
  }
}

TEST(Integrate, BoundaryStop) {
  const GeodesicPath path = integrate_geodesic(poincare_ball_metric(1), vec({0.0}), vec({1.0}), 20.0);
  EXPECT_TRUE(path.hit_boundary);
  EXPECT_LT(path.times.back(), 20.0);
  EXPECT_LT(std::abs(path.back().sigma(0)), 1.0);
  EXPECT_GT(std::abs(path.back().sigma(0)), 0.999);
  EXPECT_THROW(integrate_times(poincare_ball_metric(1), vec({0.0}), vec({1.0}), {1.0, 20.0}), Error);
}

TEST(Integrate, AutoparallelLabel) {
  const FinslerMetric m = dsl_metric("abs2(v1) + (1 + 0.3*re(z1))*abs2(v2)", 2);
  EXPECT_EQ(integrate_geodesic(m, vec({0.1, 0.1}), vec({1.0, 1.0}), 0.5).kind, "autoparallel");
}

TEST(Integrate, FixedStepOrder) {
  const FinslerMetric d = poincare_ball_metric(1);
  const double e1 = std::abs(integrate_fixed_step(d, vec({0.0}), vec({1.0}), 2.0, 20).back().sigma(0) - std::tanh(2.0));
  const double e2 = std::abs(integrate_fixed_step(d, vec({0.0}), vec({1.0}), 2.0, 40).back().sigma(0) - std::tanh(2.0));
  EXPECT_NEAR(e1 / e2, 16.0, 3.0);
}

TEST(Integrate, SampledTimesAndUniqueness) {
  const FinslerMetric m = poincare_ball_metric(2);
  const CVector p = vec({0.1, cplx(0.0, 0.2)}), v = vec({0.4, cplx(0.3, -0.2)});
  const auto st = integrate_times(m, p, v, {0.0, 0.5, 1.0});
  ASSERT_EQ(st.size(), 3u);
  EXPECT_EQ(st[0].sigma, p);
  const GeodesicPath tail = integrate_geodesic(m, st[1].sigma, st[1].velocity, 0.5);
  EXPECT_LT((tail.back().sigma - st[2].sigma).norm(), 1e-8);
  const GeodesicPath path = integrate_geodesic(m, p, v, 1.0);
  EXPECT_LT((path_state_at(m, path, 0.5).sigma - st[1].sigma).norm(), 1e-8);
}

TEST(ExpMap, Examples) {
  const CVector v = vec({cplx(0.3, -0.7)});
  EXPECT_LT((exp_map(euclidean_metric(1), vec({0.0}), v) - v).norm(), 1e-12);
  EXPECT_EQ(exp_map(poincare_ball_metric(1), vec({0.2}), vec({0.0})), vec({0.2}));
  for (double t : {0.5, 1.0, 2.0, 3.0}) {
    for (double th : {0.0, M_PI / 3, M_PI / 2}) {
      const CVector e = exp_map(poincare_ball_metric(1), vec({0.0}), vec({std::polar(t, th)}));
      EXPECT_NEAR(std::abs(e(0) - std::polar(std::tanh(t), th)), 0, 1e-6);
    }
  }
  EXPECT_NEAR(std::abs(exp_map(poincare_ball_metric(1), vec({0.0}), vec({std::polar(0.5, M_PI / 3)}))(0) -
                       std::polar(0.462117, M_PI / 3)),
              0, 1e-6);
  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    const CVector a = 0.3 * rng.complex_normal(2), b = 0.3 * rng.complex_normal(2);
    EXPECT_GT((exp_map(poincare_ball_metric(2), CVector::Zero(2), a) - exp_map(poincare_ball_metric(2), CVector::Zero(2), b)).norm(),
              0.0);
  }
}

TEST(Length, Examples) {
  const Curve line{[](double t) -> CVector { return vec({t, 0.0}); }, [](double) -> CVector { return vec({1.0, 0.0}); }};
  EXPECT_NEAR(curve_length(euclidean_metric(2), line, 0.0, 2.0), 2.0, 1e-12);
  const Curve half{[](double t) -> CVector { return vec({0.5 * t}); }, [](double) -> CVector { return vec({0.5}); }};
  EXPECT_NEAR(curve_length(poincare_ball_metric(1), half, 0.0, 1.0), std::atanh(0.5), 1e-8);
  EXPECT_NEAR(curve_length(poincare_ball_metric(1), half, 0.0, 1.0), 0.549306, 1e-6);
  const FinslerMetric d = poincare_ball_metric(1);
  const GeodesicPath path = integrate_geodesic(d, vec({0.1}), vec({cplx(0.2, 0.5)}), 1.0);
  // unit speed after normalisation by F(v)
  EXPECT_NEAR(curve_length(d, path_curve(d, path), 0.0, 1.0), path.speed[0], 1e-6);
  const Curve stuck{[](double) -> CVector { return vec({0.1}); }, [](double) -> CVector { return vec({0.0}); }};
  try {
    curve_length(d, stuck, 0.0, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_curve);
  }
}
