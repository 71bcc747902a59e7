#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <functional>
#include <vector>

#include "finsler/metric.hpp"

namespace oracle {

using mp = boost::multiprecision::cpp_bin_float_50;
using Real4n = std::vector<mp>;  // (x1, y1, ..., xn, yn, u1, w1, ..., un, wn)
using RealG = std::function<mp(const Real4n&)>;

inline Real4n coordinates(const finsler::FinslerPoint& p) {
  const int n = p.dim();
  Real4n x(4 * n);
  for (int k = 0; k < n; ++k) {
    x[2 * k] = p.z(k).real();
    x[2 * k + 1] = p.z(k).imag();
    x[2 * n + 2 * k] = p.v(k).real();
    x[2 * n + 2 * k + 1] = p.v(k).imag();
  }
  return x;
}

inline mp sq(const mp& a) { return a * a; }

inline mp euclidean(const Real4n& x) {
  const int n = static_cast<int>(x.size()) / 4;
  mp s = 0;
  for (int k = 0; k < 2 * n; ++k) s += sq(x[2 * n + k]);
  return s;
}

// (|v|^2 (1 - |z|^2) + |<v, z>|^2) / (1 - |z|^2)^2
inline mp ball(const Real4n& x) {
  const int n = static_cast<int>(x.size()) / 4;
  mp z2 = 0, v2 = 0, re = 0, im = 0;
  for (int k = 0; k < n; ++k) {
    const mp &a = x[2 * k], &b = x[2 * k + 1], &u = x[2 * n + 2 * k], &w = x[2 * n + 2 * k + 1];
    z2 += a * a + b * b;
    v2 += u * u + w * w;
    re += u * a + w * b;
    im += w * a - u * b;
  }
  const mp A = 1 - z2;
  return (A * v2 + re * re + im * im) / (A * A);
}

inline RealG lp(double p) {
  return [p](const Real4n& x) {
    const int n = static_cast<int>(x.size()) / 4;
    mp s = 0;
    for (int k = 0; k < n; ++k) s += pow(sq(x[2 * n + 2 * k]) + sq(x[2 * n + 2 * k + 1]), mp(p) / 2);
    return pow(s, mp(2) / mp(p));
  };
}

// g = [[1 + |z2|^2, 0.3 z1 conj(z2)], [0.3 conj(z1) z2, 2 + |z1|^2]], not Kahler
inline mp hermitian_pair(const Real4n& x) {
  const mp z1r = x[0], z1i = x[1], z2r = x[2], z2i = x[3];
  const mp v1r = x[4], v1i = x[5], v2r = x[6], v2i = x[7];
  const mp d1 = 1 + sq(z2r) + sq(z2i), d2 = 2 + sq(z1r) + sq(z1i);
  // c = z1 conj(z2), e = v1 conj(v2)
  const mp cr = z1r * z2r + z1i * z2i, ci = z1i * z2r - z1r * z2i;
  const mp er = v1r * v2r + v1i * v2i, ei = v1i * v2r - v1r * v2i;
  return d1 * (sq(v1r) + sq(v1i)) + d2 * (sq(v2r) + sq(v2i)) + mp("0.6") * (cr * er - ci * ei);
}

inline const char* kHermitianPairG[2][2] = {{"1 + abs2(z2)", "0.3*z1*conj(z2)"},
                                            {"0.3*conj(z1)*z2", "2 + abs2(z1)"}};

/// Nested central differences of f along the listed real directions.
inline mp real_partial(const RealG& f, Real4n x, const std::vector<int>& dirs, const mp& h, size_t k = 0) {
  if (k == dirs.size()) return f(x);
  const int d = dirs[k];
  const mp x0 = x[d];
  x[d] = x0 + h;
  const mp plus = real_partial(f, x, dirs, h, k + 1);
  x[d] = x0 - h;
  const mp minus = real_partial(f, x, dirs, h, k + 1);
  return (plus - minus) / (2 * h);
}

/// Wirtinger derivative for a list of slots, d/dz = (d/dx - i d/dy)/2, d/dzbar = (d/dx + i d/dy)/2.
inline std::complex<double> wirtinger(const RealG& f, const finsler::FinslerPoint& p,
                                      const std::vector<finsler::Slot>& slots, double h = 1e-5) {
  const int n = p.dim();
  const Real4n x = coordinates(p);
  const size_t k = slots.size();
  mp re = 0, im = 0;
  for (unsigned mask = 0; mask < (1u << k); ++mask) {
    std::vector<int> dirs;
    // coefficient is the product of 1/2 or (-+ i)/2 factors
    mp cr = 1, ci = 0;
    for (size_t s = 0; s < k; ++s) {
      const finsler::Slot sl = slots[s];
      const bool fiber = sl.kind == finsler::SlotKind::v || sl.kind == finsler::SlotKind::vbar;
      const bool anti = sl.kind == finsler::SlotKind::zbar || sl.kind == finsler::SlotKind::vbar;
      const int base = (fiber ? 2 * n : 0) + 2 * sl.index;
      mp fr = mp(1) / 2, fi = 0;
      if (mask & (1u << s)) {
        dirs.push_back(base + 1);
        fr = 0;
        fi = anti ? mp(1) / 2 : mp(-1) / 2;
      } else {
        dirs.push_back(base);
      }
      const mp nr = cr * fr - ci * fi, ni = cr * fi + ci * fr;
      cr = nr;
      ci = ni;
    }
    const mp d = real_partial(f, x, dirs, mp(h));
    re += cr * d;
    im += ci * d;
  }
  return {static_cast<double>(re), static_cast<double>(im)};
}

}  // namespace oracle
