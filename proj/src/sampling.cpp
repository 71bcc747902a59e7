#include "finsler/sampling.hpp"

#include <cmath>
#include <numbers>

#include "finsler/errors.hpp"

namespace finsler {

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::uniform(double a, double b) { return a + (b - a) * uniform(); }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

cplx Rng::complex_normal() {
  const double s = std::sqrt(0.5);
  const double re = normal();
  const double im = normal();
  return {s * re, s * im};
}

CVector Rng::complex_normal(int n) {
  CVector v(n);
  for (int i = 0; i < n; ++i) v(i) = complex_normal();
  return v;
}

CVector Rng::unit_sphere(int n) {
  CVector v = complex_normal(n);
  while (v.norm() < 1e-8) v = complex_normal(n);
  return v / v.norm();
}

std::vector<FinslerPoint> random_points(int n, int count, uint64_t seed, double radius) {
  if (n < 1 || count < 0) fail(ErrorKind::invalid_argument, "bad sample request");
  Rng rng(seed);
  std::vector<FinslerPoint> pts;
  pts.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double r = radius * std::pow(rng.uniform(), 1.0 / (2.0 * n));
    CVector z = rng.unit_sphere(n) * r;
    const double scale = std::pow(10.0, rng.uniform(-1.0, 1.0));
    CVector v = rng.unit_sphere(n) * scale;
    pts.emplace_back(z, v);
  }
  return pts;
}

std::vector<FinslerPoint> grid_points(int n, int k, double radius) {
  if (n < 1 || k < 1) fail(ErrorKind::invalid_argument, "bad grid request");
  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  auto direction = [n, golden](int i, double phase) {
    CVector d(n);
    for (int a = 0; a < n; ++a) {
      const double ang = 2.0 * std::numbers::pi * std::fmod(golden * (i + 1) * (a + 1) + phase, 1.0);
      d(a) = std::polar(1.0 + 0.5 * a, ang);
    }
    return CVector(d / d.norm());
  };
  std::vector<FinslerPoint> pts;
  pts.reserve(static_cast<size_t>(k) * k);
  for (int i = 0; i < k; ++i) {
    const double r = k == 1 ? 0.0 : radius * i / (k - 1);
    const CVector z = direction(i, 0.0) * r;
    for (int j = 0; j < k; ++j) {
      const double mag = k == 1 ? 1.0 : std::pow(10.0, -1.0 + 2.0 * j / (k - 1));
      pts.emplace_back(z, CVector(direction(j, 0.25) * mag));
    }
  }
  return pts;
}

}  // namespace finsler
