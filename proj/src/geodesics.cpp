#include "finsler/geodesics.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <limits>
#include <memory>

#include "finsler/connection.hpp"
#include "finsler/errors.hpp"
#include "finsler/torsion.hpp"

namespace finsler {

namespace odeint = boost::numeric::odeint;

namespace {

using State = std::vector<double>;

State pack(const GeodesicState& s) {
  const int n = static_cast<int>(s.sigma.size());
  State x(4 * n);
  for (int i = 0; i < n; ++i) {
    x[2 * i] = s.sigma(i).real();
    x[2 * i + 1] = s.sigma(i).imag();
    x[2 * n + 2 * i] = s.velocity(i).real();
    x[2 * n + 2 * i + 1] = s.velocity(i).imag();
  }
  return x;
}

GeodesicState unpack(const State& x) {
  const int n = static_cast<int>(x.size()) / 4;
  GeodesicState s{CVector(n), CVector(n)};
  for (int i = 0; i < n; ++i) {
    s.sigma(i) = cplx(x[2 * i], x[2 * i + 1]);
    s.velocity(i) = cplx(x[2 * n + 2 * i], x[2 * n + 2 * i + 1]);
  }
  return s;
}

struct System {
  const FinslerMetric& m;
  void operator()(const State& x, State& dxdt, double) const { dxdt = pack(geodesic_rhs(m, unpack(x))); }
};

void check_initial(const FinslerMetric& m, const CVector& p, const CVector& v) {
  if (p.size() != m.dim() || v.size() != m.dim()) {
    fail(ErrorKind::invalid_argument, "initial point and velocity must have dimension " + std::to_string(m.dim()));
  }
}

std::string path_kind(const FinslerMetric& m, const FinslerPoint& p, double tol) {
  try {
    return kahler_residuals(point_geometry(m, p)).weak < tol ? "geodesic" : "autoparallel";
  } catch (const Error&) {
    return "autoparallel";
  }
}

// Integrates the unit-speed problem and records the samples rescaled to the caller's time.
GeodesicPath integrate_scaled(const FinslerMetric& m, const CVector& p, const CVector& v,
                              const std::vector<double>& stops, const GeodesicOptions& opts,
                              bool record_steps) {
  check_initial(m, p, v);
  if (!(opts.tol > 0.0)) fail(ErrorKind::invalid_argument, "solver tolerance must be positive");
  const double F0 = metric_speed(m, p, v);
  if (!(F0 > 0.0)) fail(ErrorKind::invalid_argument, "F(v) must be positive");

  GeodesicPath path;
  path.tol = opts.tol;
  path.kind = path_kind(m, FinslerPoint(p, v), opts.kahler_tol);
  auto record = [&](double s, const State& x) {
    GeodesicState st = unpack(x);
    st.velocity *= F0;
    path.times.push_back(s / F0);
    path.speed.push_back(metric_speed(m, st.sigma, st.velocity));
    path.states.push_back(std::move(st));
  };

  State x = pack({p, v / F0});
  double s = 0.0;
  record(s, x);
  auto stepper = odeint::make_controlled(opts.tol, opts.tol, odeint::runge_kutta_dopri5<State>());
  System sys{m};
  double ds = opts.initial_step;
  // Largest step below `hi` whose endpoint keeps the required margin; the path ends there.
  auto stop_at_boundary = [&](double hi) {
    odeint::runge_kutta_dopri5<State> single;
    double lo = 0.0;
    State best = x;
    while (hi - lo > 1e-13 * std::max(1.0, s)) {
      const double mid = 0.5 * (lo + hi);
      State y = x;
      bool inside = true;
      try {
        single.do_step(sys, y, s, mid);
        inside = m.domain_margin(unpack(y).sigma) >= opts.boundary_margin;
      } catch (const DomainError&) {
        inside = false;
      }
      if (inside) {
        lo = mid;
        best = y;
      } else {
        hi = mid;
      }
    }
    x = best;
    s += lo;
    path.hit_boundary = true;
    record(s, x);
  };
  for (double stop_t : stops) {
    const double stop = stop_t * F0;
    while (s < stop) {
      if (path.steps + path.rejected >= opts.max_steps) {
        fail(ErrorKind::stiffness_failure, "geodesic integration exceeded the step budget");
      }
      const double trial_ds = std::min(ds, stop - s);
      const bool clamped = trial_ds < ds;
      State trial = x;
      double trial_s = s, h = trial_ds;
      odeint::controlled_step_result res;
      try {
        res = stepper.try_step(sys, trial, trial_s, h);
      } catch (const DomainError&) {
        stop_at_boundary(trial_ds);
        return path;
      }
      if (res == odeint::success && m.has_domain() &&
          m.domain_margin(unpack(trial).sigma) < opts.boundary_margin) {
        stop_at_boundary(trial_s - s);
        return path;
      }
      if (res == odeint::success) {
        x = trial;
        s = (stop - trial_s) < 1e-15 * std::max(1.0, stop) ? stop : trial_s;
        ++path.steps;
        if (!clamped || h > ds) ds = h;
        if (record_steps) record(s, x);
        continue;
      }
      ++path.rejected;
      ds = h;
      if (ds < 1e-14 * std::max(1.0, s)) {
        fail(ErrorKind::stiffness_failure, "step size underflow at t = " + std::to_string(s / F0));
      }
    }
    if (!record_steps) record(s, x);
  }
  return path;
}

}  // namespace

double metric_speed(const FinslerMetric& m, const CVector& sigma, const CVector& velocity) {
  return std::sqrt(m.value(FinslerPoint(sigma, velocity)));
}

CVector geodesic_acceleration(const FinslerMetric& m, const CVector& sigma, const CVector& velocity) {
  const int n = m.dim();
  const MetricJet j = m.evaluate(FinslerPoint(sigma, velocity), 2);
  const LeviData L = levi_data(j);
  if (!L.strongly_pseudoconvex) {
    fail(ErrorKind::degenerate_metric, "Levi matrix not positive definite along the curve");
  }
  CVector acc = CVector::Zero(n);
  for (int a = 0; a < n; ++a) {
    for (int mu = 0; mu < n; ++mu) {
      cplx g(0.0);
      for (int t = 0; t < n; ++t) g += L.inverse(t, a) * j.G_vb_z(t, mu);
      acc(a) -= g * velocity(mu);
    }
  }
  return acc;
}

GeodesicState geodesic_rhs(const FinslerMetric& m, const GeodesicState& st) {
  return {st.velocity, geodesic_acceleration(m, st.sigma, st.velocity)};
}

double GeodesicPath::speed_drift() const {
  double d = 0.0;
  for (double f : speed) d = std::max(d, std::abs(f - speed.front()));
  return d;
}

GeodesicPath integrate_geodesic(const FinslerMetric& m, const CVector& p, const CVector& v, double T,
                                const GeodesicOptions& opts) {
  if (!(T >= 0.0) || !std::isfinite(T)) fail(ErrorKind::invalid_argument, "T must be finite and non-negative");
  return integrate_scaled(m, p, v, {T}, opts, true);
}

std::vector<GeodesicState> integrate_times(const FinslerMetric& m, const CVector& p, const CVector& v,
                                           const std::vector<double>& times, const GeodesicOptions& opts) {
  for (size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0) || (i > 0 && times[i] < times[i - 1])) {
      fail(ErrorKind::invalid_argument, "times must be non-negative and increasing");
    }
  }
  GeodesicPath path = integrate_scaled(m, p, v, times, opts, false);
  if (path.hit_boundary) fail(ErrorKind::domain_error, "geodesic left the domain before the last requested time");
  // sample 0 is the initial state, then one sample per requested time
  return {path.states.begin() + 1, path.states.end()};
}

GeodesicPath integrate_fixed_step(const FinslerMetric& m, const CVector& p, const CVector& v, double T,
                                  int steps) {
  check_initial(m, p, v);
  if (steps < 1) fail(ErrorKind::invalid_argument, "steps must be positive");
  GeodesicPath path;
  path.kind = path_kind(m, FinslerPoint(p, v), 1e-8);
  odeint::runge_kutta4<State> rk4;
  System sys{m};
  State x = pack({p, v});
  const double h = T / steps;
  path.times.push_back(0.0);
  path.states.push_back({p, v});
  path.speed.push_back(metric_speed(m, p, v));
  for (int i = 0; i < steps; ++i) {
    rk4.do_step(sys, x, i * h, h);
    GeodesicState st = unpack(x);
    path.times.push_back((i + 1) * h);
    path.speed.push_back(metric_speed(m, st.sigma, st.velocity));
    path.states.push_back(std::move(st));
    ++path.steps;
  }
  return path;
}

CVector exp_map(const FinslerMetric& m, const CVector& p, const CVector& v, const GeodesicOptions& opts) {
  check_initial(m, p, v);
  if (v.norm() <= m.slit_epsilon) return p;
  const double F = metric_speed(m, p, v);
  GeodesicPath path = integrate_geodesic(m, p, v / F, F, opts);
  if (path.hit_boundary) fail(ErrorKind::domain_error, "exponential map leaves the domain");
  return path.back().sigma;
}

double curve_length(const FinslerMetric& m, const Curve& c, double a, double b, const LengthOptions& opts) {
  if (!c.position || !c.velocity) fail(ErrorKind::invalid_argument, "curve needs position and velocity");
  if (!(b >= a)) fail(ErrorKind::invalid_argument, "interval must satisfy a <= b");
  auto f = [&](double t) {
    const CVector v = c.velocity(t);
    if (v.norm() < opts.eps_v) {
      throw Error(ErrorKind::invalid_curve, "curve is not regular at t = " + std::to_string(t));
    }
    return metric_speed(m, c.position(t), v);
  };
  if (a == b) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, opts.max_depth, opts.tol);
}

GeodesicState path_state_at(const FinslerMetric& m, const GeodesicPath& path, double t, double tol) {
  if (path.times.empty()) fail(ErrorKind::invalid_argument, "empty path");
  if (t < path.times.front() || t > path.times.back()) {
    fail(ErrorKind::invalid_argument, "time outside the path range");
  }
  auto it = std::upper_bound(path.times.begin(), path.times.end(), t);
  const size_t k = static_cast<size_t>(std::max<std::ptrdiff_t>(0, (it - path.times.begin()) - 1));
  const double t0 = path.times[k];
  if (t == t0) return path.states[k];
  State x = pack(path.states[k]);
  odeint::integrate_adaptive(odeint::make_controlled(tol, tol, odeint::runge_kutta_dopri5<State>()), System{m}, x,
                             t0, t, (t - t0) / 4);
  return unpack(x);
}

Curve path_curve(const FinslerMetric& m, const GeodesicPath& path, double tol) {
  auto shared = std::make_shared<GeodesicPath>(path);
  return {[m, shared, tol](double t) { return path_state_at(m, *shared, t, tol).sigma; },
          [m, shared, tol](double t) { return path_state_at(m, *shared, t, tol).velocity; }};
}

}  // namespace finsler
