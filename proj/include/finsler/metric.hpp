#pragma once

#include <functional>
#include <initializer_list>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "finsler/jets.hpp"
#include "finsler/point.hpp"

namespace finsler {

inline constexpr double kDefaultSlitEpsilon = 1e-12;
inline constexpr double kPseudoconvexEpsilon = 1e-10;
inline constexpr double kDegenerateDeterminant = 1e-14;

enum class SlotKind { z, zbar, v, vbar };

/// One Wirtinger differentiation direction, e.g. {SlotKind::vbar, 0} for d/dvbar^1.
struct Slot {
  SlotKind kind;
  int index;
};

inline Slot Z(int i) { return {SlotKind::z, i}; }
inline Slot Zb(int i) { return {SlotKind::zbar, i}; }
inline Slot V(int i) { return {SlotKind::v, i}; }
inline Slot Vb(int i) { return {SlotKind::vbar, i}; }

/// Jet variable carrying slot `s` in dimension n.
int slot_variable(int n, Slot s);

/// Four multi-indices (z, zbar, v, vbar), each of length n, of total degree <= 4.
struct WirtingerIndex {
  std::vector<int> z, zbar, v, vbar;

  int order() const;
  /// Swap z <-> zbar and v <-> vbar.
  WirtingerIndex conjugate() const;
  static WirtingerIndex from_slots(int n, std::initializer_list<Slot> slots);
};

/// Coordinate functions z^mu, v^a as complex real-basis jets over the 4n real
/// coordinates, ordered (x^1, y^1, ..., x^n, y^n, u^1, w^1, ..., u^n, w^n).
struct SeededPoint {
  std::vector<ComplexJet> z;
  std::vector<ComplexJet> v;
};

/// Seeds the coordinate jets at p; order must lie in [1, 4].
SeededPoint seed_point_jet(const FinslerPoint& p, int order);
/// Unchecked variant also accepting order 0.
SeededPoint seed_coordinates(const FinslerPoint& p, int order);

/// Mixed Wirtinger partial of a real-coordinate jet.
cplx wirtinger_extract(const ComplexJet& jet, const WirtingerIndex& idx);
cplx wirtinger_extract(const RealJet& jet, const WirtingerIndex& idx);

/// All Wirtinger derivatives of G at a point, stored as a derivative-valued jet
/// in the slot variables (z, zbar, v, vbar).
class MetricJet {
 public:
  MetricJet() = default;
  MetricJet(FinslerPoint p, ComplexJet table);

  const FinslerPoint& point() const { return point_; }
  int dim() const { return point_.dim(); }
  int order() const { return table_.order(); }
  const ComplexJet& table() const { return table_; }

  double G() const { return table_.value().real(); }
  cplx at(const WirtingerIndex& idx) const;
  cplx d(std::initializer_list<Slot> slots) const;
  /// Derivative of G as a jet of order `order() - slots.size()`.
  ComplexJet partial(std::initializer_list<Slot> slots) const;

  // Named accessors (0-based indices).
  cplx G_v(int a) const { return d({V(a)}); }
  cplx G_vb(int a) const { return d({Vb(a)}); }
  cplx G_vvb(int a, int b) const { return d({V(a), Vb(b)}); }
  cplx G_vv(int a, int b) const { return d({V(a), V(b)}); }
  cplx G_z(int m) const { return d({Z(m)}); }
  cplx G_vb_z(int b, int m) const { return d({Vb(b), Z(m)}); }
  cplx G_vvb_z(int a, int b, int m) const { return d({V(a), Vb(b), Z(m)}); }
  cplx G_vvbv(int a, int b, int c) const { return d({V(a), Vb(b), V(c)}); }
  cplx G_vvv(int a, int b, int c) const { return d({V(a), V(b), V(c)}); }
  CMatrix levi() const;

 private:
  FinslerPoint point_;
  ComplexJet table_;
};

/// A complex Finsler metric given through G = F^2.
class FinslerMetric {
 public:
  /// G as a real-coordinate jet of the requested order (0..4).
  using JetEvaluator = std::function<RealJet(const FinslerPoint&, int order)>;
  /// Closed-form Wirtinger table of G (Wirtinger-basis jet) of the requested order.
  using AnalyticProvider = std::function<ComplexJet(const FinslerPoint&, int order)>;
  /// Positive inside the domain of z; evaluation outside raises domain-error.
  using DomainMargin = std::function<double(const CVector& z)>;

  FinslerMetric() = default;
  FinslerMetric(std::string name, int n, JetEvaluator evaluator, AnalyticProvider analytic = {},
                DomainMargin margin = {});

  const std::string& name() const { return name_; }
  int dim() const { return n_; }
  bool has_analytic() const { return static_cast<bool>(analytic_); }
  bool has_domain() const { return static_cast<bool>(margin_); }
  double domain_margin(const CVector& z) const;

  /// Same metric with the analytic provider removed, forcing the jet path.
  FinslerMetric jets_only() const;

  RealJet real_jet(const FinslerPoint& p, int order) const;
  double value(const FinslerPoint& p) const;
  MetricJet evaluate(const FinslerPoint& p, int order = kMaxJetOrder) const;

  double slit_epsilon = kDefaultSlitEpsilon;

 private:
  void check_point(const FinslerPoint& p) const;

  std::string name_;
  int n_ = 0;
  JetEvaluator evaluator_;
  AnalyticProvider analytic_;
  DomainMargin margin_;
};

MetricJet evaluate_metric_jet(const FinslerMetric& m, const FinslerPoint& p,
                              int order = kMaxJetOrder);

struct LeviData {
  CMatrix matrix;   // G_{a bbar}, row a, column b
  CMatrix inverse;  // G^{bbar a}: inverse(b, a)
  double min_eigenvalue = 0.0;
  double determinant_abs = 0.0;
  bool strongly_pseudoconvex = false;
};

LeviData levi_data(const MetricJet& j, double eps_pd = kPseudoconvexEpsilon);

/// Named residuals with insertion order preserved.
class ResidualSet {
 public:
  void set(const std::string& name, double value);
  double get(const std::string& name) const;
  bool has(const std::string& name) const;
  double max() const;
  void merge_max(const ResidualSet& other);
  const std::vector<std::pair<std::string, double>>& entries() const { return entries_; }

 private:
  std::vector<std::pair<std::string, double>> entries_;
};

/// The eight (1,1)-homogeneity consequences, as max-norm residuals.
ResidualSet homogeneity_residuals(const MetricJet& j);

// Built-in metric families.
FinslerMetric euclidean_metric(int n);
FinslerMetric poincare_ball_metric(int n);
FinslerMetric lp_finsler_metric(int n, double p);
/// G = sum g_{a bbar}(z) v^a conj(v^b), each entry given in the expression language over z1..zn.
FinslerMetric hermitian_field_metric(int n, const std::vector<std::vector<std::string>>& g);

struct BuiltinSpec {
  std::string name;
  int n = 1;
  std::map<std::string, double> numbers;
  std::vector<std::vector<std::string>> matrix;  // hermitian_field "g"
};

FinslerMetric builtin_metric(const BuiltinSpec& spec);

}  // namespace finsler
