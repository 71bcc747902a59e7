#pragma once

#include <functional>
#include <string>
#include <vector>

#include "finsler/geodesics.hpp"

namespace finsler {

/// Base curve sigma_0 on [a, b] with its first two derivatives.
struct BaseCurve {
  std::function<CVector(double)> position, velocity, acceleration;
  double a = 0, b = 1;
};

/// sigma(t) = p + t d
BaseCurve line_curve(const CVector& p, const CVector& d, double a, double b);
/// sigma(t) = tanh(t) u, the unit-speed radial geodesic of the Poincare ball for |u| = 1
BaseCurve tanh_curve(const CVector& u, double a, double b);
/// Geodesic from (p, v) integrated on [0, T]; positions come from re-integration.
BaseCurve geodesic_curve(const FinslerMetric& m, const CVector& p, const CVector& v, double T,
                         const GeodesicOptions& opts = {});

enum class BumpKind { sine, polynomial, linear };

BumpKind bump_kind_from_string(const std::string& s);
std::string to_string(BumpKind k);

/// Sigma(s, t) with the partial derivatives the formulas consume at s = 0.
struct VariationSpec {
  double a = 0, b = 1;
  double s_min = -1e-2, s_max = 1e-2;  // admissible s-range
  bool fixed_endpoints = true;
  std::function<CVector(double s, double t)> position;  // Sigma
  std::function<CVector(double s, double t)> velocity;  // d/dt Sigma
  std::function<CVector(double t)> base_acceleration;   // d^2/dt^2 Sigma(0, t)
  std::function<CVector(double t)> U;                   // d/ds Sigma(0, t)
  std::function<CVector(double t)> U_dot;               // d/dt d/ds Sigma(0, t)
  std::function<CVector(double t)> U_s;                 // d^2/ds^2 Sigma(0, t)
  /// Discrete s samples when Sigma is only known on a grid; empty for closed forms.
  std::vector<double> s_grid;
};

/// Sigma(s, t) = sigma_0(t) + s phi(t) w; phi vanishes at both ends unless kind is linear.
VariationSpec bump_variation(const BaseCurve& base, const CVector& w, BumpKind kind);

/// Sigma sampled on a uniform (s, t) grid; s values must be symmetric about 0 and include it.
/// values[i][k] = Sigma(s[i], t[k]); interpolated in t by quintic B-splines.
VariationSpec grid_variation(const std::vector<double>& s, double a, double b,
                             const std::vector<std::vector<CVector>>& values);

struct VariationOptions {
  double h = 0;           // 0 picks the default step for the order
  int panels = 32;        // composite Gauss-Legendre panels on [a, b]
  double geodesic_tol = 1e-7;
};

struct VariationResult {
  double formula = 0;
  double numeric = 0;
  double residual = 0;
  double h = 0;
  // diagnostics
  double speed_variation = 0;      // max |F(sigma_0') - F(sigma_0'(a))|
  double geodesic_residual = 0;    // max |sigma'' + Gamma(sigma') sigma'|
  double kahler_residual = 0;      // weak (first) or Kahler (second) residual along the base
  double re_ut_variation = 0;      // spread of Re<U, T> along the base
  double boundary_term = 0;
  double integral_term = 0;
  double curvature_term = 0;       // second variation only: integral of the Omega and tau^H bracket
  // second variation only: integral of Re<<nabla U, nabla U>>, absent from the formula; it vanishes
  // for hermitian metrics and accounts for the gap to the numeric value otherwise
  double symmetric_term = 0;
  int nodes = 0;
};

/// l(s) = integral of F(d/dt Sigma(s, t)) on the fixed quadrature nodes.
double variation_length(const FinslerMetric& m, const VariationSpec& v, double s, int panels = 32);

VariationResult first_variation_check(const FinslerMetric& m, const VariationSpec& v,
                                      const VariationOptions& opts = {});
VariationResult second_variation_check(const FinslerMetric& m, const VariationSpec& v,
                                       const VariationOptions& opts = {});

}  // namespace finsler
