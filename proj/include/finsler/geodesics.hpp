#pragma once

#include <functional>
#include <string>
#include <vector>

#include "finsler/metric.hpp"

namespace finsler {

struct GeodesicState {
  CVector sigma;     // position
  CVector velocity;  // d^{1,0} sigma (d/dt)
};

/// (sigma', velocity') = (velocity, -Gamma^a_{;m}(sigma, velocity) velocity^m)
GeodesicState geodesic_rhs(const FinslerMetric& m, const GeodesicState& st);
CVector geodesic_acceleration(const FinslerMetric& m, const CVector& sigma, const CVector& velocity);

/// F(velocity) at sigma.
double metric_speed(const FinslerMetric& m, const CVector& sigma, const CVector& velocity);

struct GeodesicOptions {
  double tol = 1e-9;               // per-step relative (and absolute) tolerance
  double boundary_margin = 1e-6;   // stop when the domain margin drops below this
  double initial_step = 1e-2;
  long max_steps = 2000000;
  double kahler_tol = 1e-8;        // weak-Kahler test deciding the path label
};

struct GeodesicPath {
  std::vector<double> times;
  std::vector<GeodesicState> states;
  std::vector<double> speed;  // F(velocity) per sample
  long steps = 0;
  long rejected = 0;
  double tol = 0;
  bool hit_boundary = false;
  std::string kind = "geodesic";  // "geodesic" or "autoparallel"

  double speed_drift() const;
  const GeodesicState& back() const { return states.back(); }
};

/// Adaptive Dormand-Prince integration from (p, v) over [0, T] in unit-speed normalisation.
GeodesicPath integrate_geodesic(const FinslerMetric& m, const CVector& p, const CVector& v, double T,
                                const GeodesicOptions& opts = {});

/// States at the requested increasing times (all >= 0) along the geodesic from (p, v).
std::vector<GeodesicState> integrate_times(const FinslerMetric& m, const CVector& p, const CVector& v,
                                           const std::vector<double>& times, const GeodesicOptions& opts = {});

/// Classical fixed-step RK4 with `steps` equal steps over [0, T].
GeodesicPath integrate_fixed_step(const FinslerMetric& m, const CVector& p, const CVector& v, double T,
                                  int steps);

/// exp_p(v): endpoint of the unit-speed geodesic of length F(v); exp_p(0) = p.
CVector exp_map(const FinslerMetric& m, const CVector& p, const CVector& v, const GeodesicOptions& opts = {});

/// A parametrised curve with its velocity.
struct Curve {
  std::function<CVector(double)> position;
  std::function<CVector(double)> velocity;
};

struct LengthOptions {
  double tol = 1e-10;
  int max_depth = 15;
  double eps_v = kDefaultSlitEpsilon;
};

double curve_length(const FinslerMetric& m, const Curve& c, double a, double b, const LengthOptions& opts = {});

/// State at time t along a computed path, obtained by re-integrating from the nearest sample.
GeodesicState path_state_at(const FinslerMetric& m, const GeodesicPath& path, double t, double tol = 1e-11);

/// The path as a curve over [times.front(), times.back()].
Curve path_curve(const FinslerMetric& m, const GeodesicPath& path, double tol = 1e-11);

}  // namespace finsler
