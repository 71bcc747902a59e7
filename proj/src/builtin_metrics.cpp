#include <cmath>

#include "finsler/dsl.hpp"
#include "finsler/errors.hpp"
#include "finsler/metric.hpp"

namespace finsler {

namespace {

ComplexJet sum_abs2(const std::vector<ComplexJet>& xs) {
  ComplexJet s = abs2(xs[0]);
  for (size_t i = 1; i < xs.size(); ++i) s += abs2(xs[i]);
  return s;
}

RealJet checked_real(const ComplexJet& c) { return real_part(c); }

// Pochhammer symbol (s)_k.
double rising(double s, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= s + i;
  return r;
}

double falling_factorial_ratio(int b, int k) {
  // b! / (b - k)!
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= b - i;
  return r;
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

cplx ipow(cplx x, int k) {
  cplx r(1.0);
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

// d_z^a d_zbar^b (1 - z zbar)^{-s}.
cplx disk_factor(cplx z, int a, int b, double s) {
  const double w = 1.0 - std::norm(z);
  const double t = s + b;
  const cplx zb = std::conj(z);
  cplx sum(0.0);
  for (int j = 0; j <= a; ++j) {
    const int pz = b - a + j;
    if (pz < 0) continue;
    sum += binom(a, j) * falling_factorial_ratio(b, a - j) * ipow(z, pz) * rising(t, j) *
           ipow(zb, j) * std::pow(w, -t - j);
  }
  return rising(s, b) * sum;
}

ComplexJet disk_analytic(const FinslerPoint& p, int order) {
  auto space = JetSpace::get(4);
  ComplexJet t(space, order, JetBasis::wirtinger);
  const cplx z = p.z(0), v = p.v(0);
  for (size_t i = 0; i < t.size(); ++i) {
    const std::vector<int> e = space->exponents(static_cast<int>(i));
    const int a = e[0], b = e[1], c = e[2], d = e[3];
    if (c > 1 || d > 1) continue;
    const cplx vpart = (c == 0 ? v : cplx(1.0)) * (d == 0 ? std::conj(v) : cplx(1.0));
    t[i] = disk_factor(z, a, b, 2.0) * vpart;
  }
  return t;
}

ComplexJet euclidean_analytic(const FinslerPoint& p, int order) {
  const int n = p.dim();
  auto space = JetSpace::get(4 * n);
  ComplexJet t(space, order, JetBasis::wirtinger);
  t[0] = p.v.squaredNorm();
  if (order >= 1) {
    for (int a = 0; a < n; ++a) {
      t[1 + slot_variable(n, V(a))] = std::conj(p.v(a));
      t[1 + slot_variable(n, Vb(a))] = p.v(a);
    }
  }
  if (order >= 2) {
    for (int a = 0; a < n; ++a) {
      const int vars[2] = {slot_variable(n, V(a)), slot_variable(n, Vb(a))};
      t[space->index_of_vars(vars)] = 1.0;
    }
  }
  return t;
}

double ball_margin(const CVector& z) { return 1.0 - z.norm(); }

}  // namespace

FinslerMetric euclidean_metric(int n) {
  return FinslerMetric(
      "euclidean", n,
      [](const FinslerPoint& p, int order) {
        return checked_real(sum_abs2(seed_coordinates(p, order).v));
      },
      euclidean_analytic);
}

FinslerMetric poincare_ball_metric(int n) {
  auto jets = [](const FinslerPoint& p, int order) {
    const SeededPoint s = seed_coordinates(p, order);
    const ComplexJet A = cplx(1.0) - sum_abs2(s.z);
    const ComplexJet B = sum_abs2(s.v);
    ComplexJet pairing = s.v[0] * conj(s.z[0]);
    for (size_t i = 1; i < s.v.size(); ++i) pairing += s.v[i] * conj(s.z[i]);
    return checked_real((A * B + abs2(pairing)) / (A * A));
  };
  FinslerMetric::AnalyticProvider analytic;
  if (n == 1) analytic = disk_analytic;
  return FinslerMetric("poincare_ball", n, jets, analytic, ball_margin);
}

FinslerMetric lp_finsler_metric(int n, double p) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    fail(ErrorKind::invalid_argument, "lp_finsler requires p > 1");
  }
  return FinslerMetric("lp_finsler", n, [p](const FinslerPoint& pt, int order) {
    const SeededPoint s = seed_coordinates(pt, order);
    ComplexJet sum = pow_real(abs2(s.v[0]), p / 2.0);
    for (size_t i = 1; i < s.v.size(); ++i) sum += pow_real(abs2(s.v[i]), p / 2.0);
    return checked_real(pow_real(sum, 2.0 / p));
  });
}

FinslerMetric hermitian_field_metric(int n, const std::vector<std::vector<std::string>>& g) {
  if (static_cast<int>(g.size()) != n) {
    fail(ErrorKind::invalid_argument, "hermitian_field needs an n x n matrix of expressions");
  }
  auto entries = std::make_shared<std::vector<Expr>>();
  for (const auto& row : g) {
    if (static_cast<int>(row.size()) != n) {
      fail(ErrorKind::invalid_argument, "hermitian_field needs an n x n matrix of expressions");
    }
    for (const auto& text : row) {
      MetricExpr e = parse_metric(text, n);
      if (uses_fiber_variables(e.root)) {
        fail(ErrorKind::invalid_argument, "hermitian_field entries may depend on z only: " + text);
      }
      entries->push_back(e.root);
    }
  }
  return FinslerMetric("hermitian_field", n, [entries, n](const FinslerPoint& p, int order) {
    const SeededPoint s = seed_coordinates(p, order);
    ComplexJet sum = ComplexJet::constant(s.v[0].space_ptr(), order, JetBasis::real, 0.0);
    try {
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
          sum += evaluate_expr_complex((*entries)[a * n + b], s) * s.v[a] * conj(s.v[b]);
        }
      }
    } catch (const Error& err) {
      if (err.kind() == ErrorKind::singular_evaluation || err.kind() == ErrorKind::domain_error) {
        throw DomainError(std::string("hermitian_field entry singular: ") + err.what(), "z");
      }
      throw;
    }
    if (!(std::abs(sum.value().imag()) < 1e-12 * std::max(1.0, std::abs(sum.value().real())))) {
      fail(ErrorKind::not_a_metric, "hermitian_field matrix is not hermitian at this point");
    }
    return real_part(sum);
  });
}

FinslerMetric builtin_metric(const BuiltinSpec& spec) {
  if (spec.n < 1) fail(ErrorKind::invalid_argument, "metric dimension must be positive");
  if (spec.name == "euclidean") return euclidean_metric(spec.n);
  if (spec.name == "poincare_ball") return poincare_ball_metric(spec.n);
  if (spec.name == "lp_finsler") {
    auto it = spec.numbers.find("p");
    if (it == spec.numbers.end()) fail(ErrorKind::invalid_argument, "lp_finsler needs parameter p");
    return lp_finsler_metric(spec.n, it->second);
  }
  if (spec.name == "hermitian_field") return hermitian_field_metric(spec.n, spec.matrix);
  fail(ErrorKind::invalid_argument, "unknown builtin metric '" + spec.name + "'");
}

}  // namespace finsler
