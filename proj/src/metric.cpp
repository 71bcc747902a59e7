#include "finsler/metric.hpp"

#include <algorithm>
#include <cmath>

#include "finsler/errors.hpp"

namespace finsler {

int slot_variable(int n, Slot s) {
  if (s.index < 0 || s.index >= n) fail(ErrorKind::invalid_argument, "slot index out of range");
  switch (s.kind) {
    case SlotKind::z: return 2 * s.index;
    case SlotKind::zbar: return 2 * s.index + 1;
    case SlotKind::v: return 2 * (n + s.index);
    case SlotKind::vbar: return 2 * (n + s.index) + 1;
  }
  return -1;
}

namespace {

std::vector<int> slot_vars(int n, const WirtingerIndex& idx) {
  auto check = [n](const std::vector<int>& m) {
    if (!m.empty() && static_cast<int>(m.size()) != n) {
      fail(ErrorKind::invalid_argument, "Wirtinger multi-index length must equal n");
    }
  };
  check(idx.z);
  check(idx.zbar);
  check(idx.v);
  check(idx.vbar);
  std::vector<int> vars;
  auto push = [&](const std::vector<int>& m, SlotKind kind) {
    for (int i = 0; i < static_cast<int>(m.size()); ++i) {
      if (m[i] < 0) fail(ErrorKind::invalid_argument, "negative entry in Wirtinger multi-index");
      vars.insert(vars.end(), m[i], slot_variable(n, {kind, i}));
    }
  };
  push(idx.z, SlotKind::z);
  push(idx.zbar, SlotKind::zbar);
  push(idx.v, SlotKind::v);
  push(idx.vbar, SlotKind::vbar);
  return vars;
}

std::vector<int> slot_vars(int n, std::initializer_list<Slot> slots) {
  std::vector<int> vars;
  for (const Slot& s : slots) vars.push_back(slot_variable(n, s));
  return vars;
}

}  // namespace

int WirtingerIndex::order() const {
  int s = 0;
  for (const auto* m : {&z, &zbar, &v, &vbar}) {
    for (int e : *m) s += e;
  }
  return s;
}

WirtingerIndex WirtingerIndex::conjugate() const { return {zbar, z, vbar, v}; }

WirtingerIndex WirtingerIndex::from_slots(int n, std::initializer_list<Slot> slots) {
  WirtingerIndex w{std::vector<int>(n, 0), std::vector<int>(n, 0), std::vector<int>(n, 0),
                   std::vector<int>(n, 0)};
  for (const Slot& s : slots) {
    if (s.index < 0 || s.index >= n) fail(ErrorKind::invalid_argument, "slot index out of range");
    switch (s.kind) {
      case SlotKind::z: ++w.z[s.index]; break;
      case SlotKind::zbar: ++w.zbar[s.index]; break;
      case SlotKind::v: ++w.v[s.index]; break;
      case SlotKind::vbar: ++w.vbar[s.index]; break;
    }
  }
  return w;
}

SeededPoint seed_coordinates(const FinslerPoint& p, int order) {
  const int n = p.dim();
  auto space = JetSpace::get(4 * n);
  SeededPoint s;
  const cplx I(0.0, 1.0);
  for (int c = 0; c < 2 * n; ++c) {
    const cplx value = c < n ? p.z(c) : p.v(c - n);
    ComplexJet j = ComplexJet::constant(space, order, JetBasis::real, value);
    if (order >= 1) {
      j[1 + 2 * c] = 1.0;
      j[1 + 2 * c + 1] = I;
    }
    (c < n ? s.z : s.v).push_back(std::move(j));
  }
  return s;
}

SeededPoint seed_point_jet(const FinslerPoint& p, int order) {
  if (order < 1 || order > kMaxJetOrder) {
    fail(ErrorKind::invalid_argument, "seed order must lie in [1, 4]");
  }
  if (p.z.size() == 0 || p.z.size() != p.v.size()) {
    fail(ErrorKind::invalid_argument, "point needs matching, nonempty z and v");
  }
  return seed_coordinates(p, order);
}

cplx wirtinger_extract(const ComplexJet& jet, const WirtingerIndex& idx) {
  if (jet.basis() != JetBasis::real || jet.nvars() % 4 != 0) {
    fail(ErrorKind::invalid_argument, "wirtinger_extract expects a real-coordinate jet over 4n variables");
  }
  const int n = jet.nvars() / 4;
  const std::vector<int> vars = slot_vars(n, idx);
  if (static_cast<int>(vars.size()) > jet.order()) {
    fail(ErrorKind::invalid_argument, "Wirtinger index degree exceeds jet order");
  }
  const int k = jet.space().index_of_vars(vars);
  cplx s(0.0);
  for (const auto& t : jet.space().wirtinger_row(k)) s += t.weight * jet[t.source];
  return s;
}

cplx wirtinger_extract(const RealJet& jet, const WirtingerIndex& idx) {
  return wirtinger_extract(to_complex(jet), idx);
}

// ---------------------------------------------------------------------------

MetricJet::MetricJet(FinslerPoint p, ComplexJet table) : point_(std::move(p)), table_(std::move(table)) {
  if (table_.basis() != JetBasis::wirtinger || table_.nvars() != 4 * point_.dim()) {
    fail(ErrorKind::invalid_argument, "metric jet table must be a Wirtinger jet over 4n slots");
  }
}

cplx MetricJet::at(const WirtingerIndex& idx) const {
  const std::vector<int> vars = slot_vars(dim(), idx);
  if (static_cast<int>(vars.size()) > order()) {
    fail(ErrorKind::invalid_argument, "Wirtinger index degree exceeds metric jet order");
  }
  return table_.derivative(vars);
}

cplx MetricJet::d(std::initializer_list<Slot> slots) const {
  if (static_cast<int>(slots.size()) > order()) {
    fail(ErrorKind::invalid_argument, "Wirtinger index degree exceeds metric jet order");
  }
  return table_.derivative(slot_vars(dim(), slots));
}

ComplexJet MetricJet::partial(std::initializer_list<Slot> slots) const {
  ComplexJet r = table_;
  for (int var : slot_vars(dim(), slots)) r = r.partial(var);
  return r;
}

CMatrix MetricJet::levi() const {
  const int n = dim();
  CMatrix m(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) m(a, b) = G_vvb(a, b);
  }
  return m;
}

// ---------------------------------------------------------------------------

FinslerMetric::FinslerMetric(std::string name, int n, JetEvaluator evaluator,
                             AnalyticProvider analytic, DomainMargin margin)
    : name_(std::move(name)),
      n_(n),
      evaluator_(std::move(evaluator)),
      analytic_(std::move(analytic)),
      margin_(std::move(margin)) {
  if (n < 1) fail(ErrorKind::invalid_argument, "metric dimension must be positive");
  if (4 * n > kMaxJetVars) {
    fail(ErrorKind::invalid_argument, "dimension too large for dense order-4 jets");
  }
}

double FinslerMetric::domain_margin(const CVector& z) const {
  return margin_ ? margin_(z) : std::numeric_limits<double>::infinity();
}

FinslerMetric FinslerMetric::jets_only() const {
  FinslerMetric m = *this;
  m.analytic_ = {};
  return m;
}

void FinslerMetric::check_point(const FinslerPoint& p) const {
  if (p.dim() != n_) {
    fail(ErrorKind::invalid_argument, "point dimension " + std::to_string(p.dim()) +
                                          " does not match metric dimension " + std::to_string(n_));
  }
  validate_point(p);
  if (p.v.norm() <= slit_epsilon) {
    fail(ErrorKind::invalid_argument, "point is not in the slit bundle (|v| <= eps_v)");
  }
  if (margin_ && !(margin_(p.z) > 0.0)) {
    std::string coord = "z=(";
    for (int i = 0; i < n_; ++i) coord += (i ? "," : "") + format_complex(p.z(i));
    coord += ")";
    throw DomainError("point outside the domain of metric " + name_ + ": " + coord, coord);
  }
}

RealJet FinslerMetric::real_jet(const FinslerPoint& p, int order) const {
  check_point(p);
  return evaluator_(p, order);
}

double FinslerMetric::value(const FinslerPoint& p) const {
  check_point(p);
  if (analytic_) return analytic_(p, 0).value().real();
  return evaluator_(p, 0).value();
}

MetricJet FinslerMetric::evaluate(const FinslerPoint& p, int order) const {
  check_point(p);
  ComplexJet table = analytic_ ? analytic_(p, order) : wirtinger_transform(evaluator_(p, order));
  const double G = table.value().real();
  if (!(G > 0.0) || !std::isfinite(G)) {
    fail(ErrorKind::not_a_metric, "G must be positive and finite off the zero section (metric " +
                                      name_ + ", G = " + std::to_string(G) + ")");
  }
  return MetricJet(p, std::move(table));
}

MetricJet evaluate_metric_jet(const FinslerMetric& m, const FinslerPoint& p, int order) {
  return m.evaluate(p, order);
}

LeviData levi_data(const MetricJet& j, double eps_pd) {
  if (j.order() < 2) fail(ErrorKind::invalid_argument, "Levi matrix needs an order-2 metric jet");
  LeviData L;
  L.matrix = j.levi();
  L.determinant_abs = std::abs(L.matrix.determinant());
  if (!(L.determinant_abs >= kDegenerateDeterminant)) {
    fail(ErrorKind::degenerate_metric,
         "Levi matrix is singular (|det| = " + std::to_string(L.determinant_abs) + ")");
  }
  L.inverse = L.matrix.inverse();
  const CMatrix herm = 0.5 * (L.matrix + L.matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
  L.min_eigenvalue = es.eigenvalues().minCoeff();
  L.strongly_pseudoconvex = L.min_eigenvalue > eps_pd;
  return L;
}

// ---------------------------------------------------------------------------

void ResidualSet::set(const std::string& name, double value) {
  for (auto& e : entries_) {
    if (e.first == name) {
      e.second = value;
      return;
    }
  }
  entries_.emplace_back(name, value);
}

double ResidualSet::get(const std::string& name) const {
  for (const auto& e : entries_) {
    if (e.first == name) return e.second;
  }
  fail(ErrorKind::invalid_argument, "no residual named " + name);
}

bool ResidualSet::has(const std::string& name) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [&](const auto& e) { return e.first == name; });
}

double ResidualSet::max() const {
  double m = 0.0;
  for (const auto& e : entries_) m = std::max(m, std::isnan(e.second) ? INFINITY : e.second);
  return m;
}

void ResidualSet::merge_max(const ResidualSet& other) {
  for (const auto& [name, value] : other.entries_) {
    if (has(name)) {
      set(name, std::max(get(name), value));
    } else {
      set(name, value);
    }
  }
}

ResidualSet homogeneity_residuals(const MetricJet& j) {
  const int n = j.dim();
  const CVector& v = j.point().v;
  const double G = j.G();
  const LeviData L = levi_data(j);
  ResidualSet r;
  double r1 = 0, r2 = 0, r5 = 0, r6 = 0, r7 = 0, r8 = 0;
  cplx euler(0.0), quad(0.0);
  for (int a = 0; a < n; ++a) {
    cplx s1(0.0), s2(0.0);
    for (int b = 0; b < n; ++b) {
      s1 += j.G_vvb(a, b) * std::conj(v(b));
      s2 += j.G_vv(a, b) * v(b);
      quad += j.G_vvb(a, b) * v(a) * std::conj(v(b));
      cplx s5(0.0), s6(0.0);
      for (int c = 0; c < n; ++c) {
        s5 += j.G_vvv(a, b, c) * v(c);
        s6 += j.G_vvbv(a, b, c) * v(c);
      }
      r5 = std::max(r5, std::abs(s5 + j.G_vv(a, b)));
      r6 = std::max(r6, std::abs(s6));
    }
    r1 = std::max(r1, std::abs(s1 - j.G_v(a)));
    r2 = std::max(r2, std::abs(s2));
    euler += j.G_v(a) * v(a);
  }
  // G^{bbar a} G_a = conj(v^b); inverse(b, a) = G^{bbar a}
  CVector Gv(n);
  for (int a = 0; a < n; ++a) Gv(a) = j.G_v(a);
  const CVector w = L.inverse * Gv;
  for (int b = 0; b < n; ++b) r7 = std::max(r7, std::abs(w(b) - std::conj(v(b))));
  for (int m = 0; m < n; ++m) {
    cplx s(0.0);
    for (int b = 0; b < n; ++b) s += j.G_vb_z(b, m) * w(b);
    r8 = std::max(r8, std::abs(s - j.G_z(m)));
  }
  r.set("levi_contract_vbar", r1);
  r.set("hessian_contract_v", r2);
  r.set("euler_v", std::abs(euler - G));
  r.set("levi_quadratic", std::abs(quad - G));
  r.set("third_vvv_contract", r5);
  r.set("third_vvbv_contract", r6);
  r.set("inverse_levi_gradient", r7);
  r.set("horizontal_gradient", r8);
  return r;
}

}  // namespace finsler
