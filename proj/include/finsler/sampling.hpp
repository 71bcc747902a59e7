#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "finsler/point.hpp"

namespace finsler {

inline constexpr uint64_t kDefaultSeed = 20240607;

/// Portable random source: 64-bit Mersenne twister with explicit conversions,
/// so sample sets are identical across standard libraries.
class Rng {
 public:
  explicit Rng(uint64_t seed = kDefaultSeed) : engine_(seed) {}

  double uniform();                  // [0, 1)
  double uniform(double a, double b);
  double normal();                   // N(0, 1)
  cplx complex_normal();             // real and imaginary parts N(0, 1/2)
  CVector complex_normal(int n);
  CVector unit_sphere(int n);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// z uniform in the ball of complex radius `radius`, v on the unit sphere scaled by 10^U[-1,1].
std::vector<FinslerPoint> random_points(int n, int count, uint64_t seed, double radius = 0.8);

/// Deterministic k x k grid: k base points with |z| in [0, radius] and k fibre vectors.
std::vector<FinslerPoint> grid_points(int n, int k, double radius = 0.9);

}  // namespace finsler
