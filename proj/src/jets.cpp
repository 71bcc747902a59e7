#include "finsler/jets.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <unordered_map>

#include "finsler/errors.hpp"

namespace finsler {

namespace {

uint64_t encode(std::span<const int> sorted_vars) {
  uint64_t key = 0;
  uint64_t mult = 1;
  for (int v : sorted_vars) {
    key += static_cast<uint64_t>(v + 1) * mult;
    mult *= 64;
  }
  return key;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

void enumerate(int nvars, int degree, int start, std::vector<int>& cur,
               std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == degree) {
    out.push_back(cur);
    return;
  }
  for (int v = start; v < nvars; ++v) {
    cur.push_back(v);
    enumerate(nvars, degree, v, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::shared_ptr<const JetSpace> JetSpace::get(int nvars) {
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const JetSpace>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(nvars);
  if (it != cache.end()) return it->second;
  auto sp = std::make_shared<const JetSpace>(nvars);
  cache.emplace(nvars, sp);
  return sp;
}

JetSpace::JetSpace(int nvars) : nvars_(nvars) {
  if (nvars < 1 || nvars > kMaxJetVars) {
    fail(ErrorKind::invalid_argument, "jet variable count out of range: " + std::to_string(nvars));
  }
  for (int d = 0; d <= kMaxJetOrder; ++d) {
    std::vector<int> cur;
    enumerate(nvars, d, 0, cur, vars_);
    sizes_[d] = static_cast<int>(vars_.size());
  }
  for (size_t i = 0; i < vars_.size(); ++i) index_.emplace(encode(vars_[i]), static_cast<int>(i));

  const int n3 = sizes_[kMaxJetOrder - 1];
  shift_.assign(static_cast<size_t>(nvars) * n3, -1);
  for (int var = 0; var < nvars; ++var) {
    for (int i = 0; i < n3; ++i) {
      std::vector<int> m = vars_[i];
      m.insert(std::upper_bound(m.begin(), m.end(), var), var);
      shift_[static_cast<size_t>(var) * n3 + i] = lookup(encode(m));
    }
  }

  const int total = sizes_[kMaxJetOrder];
  for (int i = 0; i < total; ++i) {
    const int di = degree(i);
    for (int j = 0; j < sizes_[kMaxJetOrder - di]; ++j) {
      std::vector<int> m;
      std::merge(vars_[i].begin(), vars_[i].end(), vars_[j].begin(), vars_[j].end(),
                 std::back_inserter(m));
      const int k = lookup(encode(m));
      std::vector<int> ek = exponents(k), ei = exponents(i);
      double w = 1.0;
      for (int v = 0; v < nvars; ++v) w *= binomial(ek[v], ei[v]);
      mul_.push_back({k, i, j, w});
    }
  }
  std::stable_sort(mul_.begin(), mul_.end(),
                   [](const MulTerm& a, const MulTerm& b) { return a.k < b.k; });
  for (int o = 0; o <= kMaxJetOrder; ++o) {
    mul_end_[o] = static_cast<size_t>(
        std::lower_bound(mul_.begin(), mul_.end(), sizes_[o],
                         [](const MulTerm& t, int bound) { return t.k < bound; }) -
        mul_.begin());
  }

  conj_.assign(total, -1);
  for (int i = 0; i < total && nvars % 2 == 0; ++i) {
    std::vector<int> m = vars_[i];
    for (int& v : m) v = (v % 2 == 0) ? v + 1 : v - 1;
    std::sort(m.begin(), m.end());
    conj_[i] = lookup(encode(m));
  }

  if (nvars % 2 == 0) {
    const cplx I(0.0, 1.0);
    wirt_offsets_.push_back(0);
    for (int idx = 0; idx < total; ++idx) {
      std::vector<int> e = exponents(idx);
      // Expand pair by pair into (real multi-index, weight) terms.
      std::vector<std::pair<std::vector<int>, cplx>> terms{{{}, cplx(1.0)}};
      for (int c = 0; c < nvars / 2; ++c) {
        const int a = e[2 * c], b = e[2 * c + 1];
        if (a + b == 0) continue;
        std::vector<std::pair<std::vector<int>, cplx>> next;
        for (int q = 0; q <= a + b; ++q) {
          cplx coef(0.0);
          for (int j = 0; j <= std::min(a, q); ++j) {
            const int k = q - j;
            if (k > b) continue;
            coef += binomial(a, j) * binomial(b, k) * std::pow(-I, j) * std::pow(I, k);
          }
          coef /= std::pow(2.0, a + b);
          if (std::abs(coef) == 0.0) continue;
          for (const auto& [vs, w] : terms) {
            std::vector<int> nv = vs;
            nv.insert(nv.end(), a + b - q, 2 * c);
            nv.insert(nv.end(), q, 2 * c + 1);
            next.emplace_back(std::move(nv), w * coef);
          }
        }
        terms = std::move(next);
      }
      for (auto& [vs, w] : terms) {
        std::sort(vs.begin(), vs.end());
        wirt_terms_.push_back({lookup(encode(vs)), w});
      }
      wirt_offsets_.push_back(wirt_terms_.size());
    }
  }
}

int JetSpace::lookup(uint64_t key) const {
  auto it = index_.find(key);
  return it == index_.end() ? -1 : it->second;
}

std::vector<int> JetSpace::exponents(int idx) const {
  std::vector<int> e(nvars_, 0);
  for (int v : vars_[idx]) ++e[v];
  return e;
}

int JetSpace::index_of_vars(std::span<const int> vars) const {
  if (static_cast<int>(vars.size()) > kMaxJetOrder) return -1;
  std::vector<int> m(vars.begin(), vars.end());
  for (int v : m) {
    if (v < 0 || v >= nvars_) fail(ErrorKind::invalid_argument, "jet variable out of range");
  }
  std::sort(m.begin(), m.end());
  return lookup(encode(m));
}

int JetSpace::index_of_exponents(std::span<const int> exponents) const {
  std::vector<int> m;
  for (int v = 0; v < static_cast<int>(exponents.size()); ++v) {
    if (exponents[v] < 0) fail(ErrorKind::invalid_argument, "negative exponent in multi-index");
    m.insert(m.end(), exponents[v], v);
  }
  return index_of_vars(m);
}

std::span<const JetSpace::MulTerm> JetSpace::mul_terms(int order) const {
  return std::span<const MulTerm>(mul_.data(), mul_end_[order]);
}

std::span<const JetSpace::LinearTerm> JetSpace::wirtinger_row(int idx) const {
  if (wirt_offsets_.empty()) {
    fail(ErrorKind::invalid_argument, "Wirtinger transform needs an even variable count");
  }
  return std::span<const LinearTerm>(wirt_terms_.data() + wirt_offsets_[idx],
                                     wirt_offsets_[idx + 1] - wirt_offsets_[idx]);
}

// ---------------------------------------------------------------------------

namespace {

void check_order(int order) {
  if (order < 1 || order > kMaxJetOrder) {
    fail(ErrorKind::invalid_argument,
         "jet order must lie in [1, " + std::to_string(kMaxJetOrder) + "], got " +
             std::to_string(order));
  }
}

template <typename T>
void check_compatible(const Jet<T>& a, const Jet<T>& b) {
  if (&a.space() != &b.space() || a.basis() != b.basis()) {
    fail(ErrorKind::invalid_argument, "jets over different variables cannot be combined");
  }
}

bool nonpositive(double x) { return x <= 0.0; }
bool nonpositive(cplx x) {
  return x.real() <= 0.0 && std::abs(x.imag()) <= 1e-14 * std::max(1.0, std::abs(x));
}

}  // namespace

template <typename T>
Jet<T>::Jet(std::shared_ptr<const JetSpace> space, int order, JetBasis basis)
    : space_(std::move(space)), order_(order), basis_(basis) {
  if (order < 0 || order > kMaxJetOrder) check_order(order);
  d_.assign(space_->size(order), T(0));
}

template <typename T>
Jet<T> Jet<T>::constant(std::shared_ptr<const JetSpace> space, int order, JetBasis basis, T value) {
  Jet j(std::move(space), order, basis);
  j.d_[0] = value;
  return j;
}

template <typename T>
Jet<T> Jet<T>::variable(std::shared_ptr<const JetSpace> space, int order, JetBasis basis, int var,
                        T value) {
  Jet j(std::move(space), order, basis);
  j.d_[0] = value;
  if (order >= 1) j.d_[1 + var] = T(1);
  return j;
}

template <typename T>
T Jet<T>::derivative(std::span<const int> vars) const {
  if (static_cast<int>(vars.size()) > order_) return T(0);
  const int idx = space_->index_of_vars(vars);
  return idx < 0 ? T(0) : d_[idx];
}

template <typename T>
Jet<T> Jet<T>::partial(int var) const {
  if (order_ < 1) fail(ErrorKind::invalid_argument, "cannot differentiate an order-0 jet");
  if (var < 0 || var >= nvars()) fail(ErrorKind::invalid_argument, "jet variable out of range");
  Jet r(space_, order_ - 1, basis_);
  for (size_t i = 0; i < r.d_.size(); ++i) r.d_[i] = d_[space_->shift(var, static_cast<int>(i))];
  return r;
}

template <typename T>
Jet<T> Jet<T>::truncated(int order) const {
  if (order >= order_) return *this;
  Jet r(space_, order, basis_);
  std::copy(d_.begin(), d_.begin() + r.d_.size(), r.d_.begin());
  return r;
}

template <typename T>
Jet<T> Jet<T>::operator-() const {
  Jet r = *this;
  for (auto& x : r.d_) x = -x;
  return r;
}

template <typename T>
Jet<T>& Jet<T>::operator+=(const Jet& o) {
  check_compatible(*this, o);
  if (o.order_ < order_) *this = truncated(o.order_);
  for (size_t i = 0; i < d_.size(); ++i) d_[i] += o.d_[i];
  return *this;
}

template <typename T>
Jet<T>& Jet<T>::operator-=(const Jet& o) {
  check_compatible(*this, o);
  if (o.order_ < order_) *this = truncated(o.order_);
  for (size_t i = 0; i < d_.size(); ++i) d_[i] -= o.d_[i];
  return *this;
}

template <typename T>
Jet<T>& Jet<T>::operator*=(T s) {
  for (auto& x : d_) x *= s;
  return *this;
}

template <typename T>
Jet<T> operator*(const Jet<T>& a, const Jet<T>& b) {
  check_compatible(a, b);
  const int order = std::min(a.order(), b.order());
  Jet<T> r(a.space_ptr(), order, a.basis());
  const auto ad = a.data();
  const auto bd = b.data();
  for (const auto& t : a.space().mul_terms(order)) r[t.k] += t.weight * (ad[t.i] * bd[t.j]);
  return r;
}

template <typename T>
Jet<T> compose(const Jet<T>& a, const std::array<T, kMaxJetOrder + 1>& f) {
  const int o = a.order();
  Jet<T> h = a;
  h[0] = T(0);
  double fact = 1.0;
  for (int k = 2; k <= o; ++k) fact *= k;
  Jet<T> r = Jet<T>::constant(a.space_ptr(), o, a.basis(), f[o] / fact);
  for (int k = o - 1; k >= 0; --k) {
    fact /= std::max(1, k + 1);
    r = r * h;
    r[0] += f[k] / fact;
  }
  return r;
}

template <typename T>
Jet<T> reciprocal(const Jet<T>& a) {
  const T a0 = a.value();
  if (std::abs(a0) == 0.0 || !std::isfinite(std::abs(a0))) {
    fail(ErrorKind::singular_evaluation, "division by a jet with zero constant term");
  }
  std::array<T, kMaxJetOrder + 1> f{};
  T inv = T(1) / a0;
  T p = inv;
  double sign_fact = 1.0;
  for (int k = 0; k <= kMaxJetOrder; ++k) {
    f[k] = sign_fact * p;
    p *= inv;
    sign_fact *= -(k + 1.0);
  }
  return compose(a, f);
}

template <typename T>
Jet<T> operator/(const Jet<T>& a, const Jet<T>& b) {
  return a * reciprocal(b);
}

template <typename T>
Jet<T> pow_real(const Jet<T>& a, double p) {
  if (!std::isfinite(p)) fail(ErrorKind::invalid_argument, "non-finite exponent");
  const bool integral = std::floor(p) == p && std::abs(p) <= 64;
  if (integral && p >= 0) {
    Jet<T> r = Jet<T>::constant(a.space_ptr(), a.order(), a.basis(), T(1));
    Jet<T> base = a;
    for (long e = static_cast<long>(p); e > 0; e >>= 1) {
      if (e & 1) r = r * base;
      if (e > 1) base = base * base;
    }
    return r;
  }
  if (integral) return pow_real(reciprocal(a), -p);
  const T a0 = a.value();
  if (nonpositive(a0)) {
    fail(ErrorKind::domain_error, "non-integer power of a nonpositive constant term");
  }
  std::array<T, kMaxJetOrder + 1> f{};
  double c = 1.0;
  for (int k = 0; k <= kMaxJetOrder; ++k) {
    f[k] = c * std::pow(a0, p - k);
    c *= (p - k);
  }
  return compose(a, f);
}

template <typename T>
Jet<T> sqrt(const Jet<T>& a) {
  if (nonpositive(a.value())) fail(ErrorKind::domain_error, "sqrt of a nonpositive constant term");
  return pow_real(a, 0.5);
}

template <typename T>
Jet<T> log(const Jet<T>& a) {
  const T a0 = a.value();
  if (nonpositive(a0)) fail(ErrorKind::domain_error, "log of a nonpositive constant term");
  std::array<T, kMaxJetOrder + 1> f{};
  f[0] = std::log(a0);
  T inv = T(1) / a0;
  T p = inv;
  double c = 1.0;
  for (int k = 1; k <= kMaxJetOrder; ++k) {
    f[k] = c * p;
    p *= inv;
    c *= -static_cast<double>(k);
  }
  return compose(a, f);
}

template <typename T>
Jet<T> exp(const Jet<T>& a) {
  std::array<T, kMaxJetOrder + 1> f{};
  f.fill(std::exp(a.value()));
  return compose(a, f);
}

ComplexJet conj(const ComplexJet& a) {
  ComplexJet r(a.space_ptr(), a.order(), a.basis());
  if (a.basis() == JetBasis::real) {
    for (size_t i = 0; i < a.size(); ++i) r[i] = std::conj(a[i]);
  } else {
    for (size_t i = 0; i < a.size(); ++i) r[i] = std::conj(a[a.space().conj_index(static_cast<int>(i))]);
  }
  return r;
}

ComplexJet re(const ComplexJet& a) { return (a + conj(a)) * cplx(0.5); }
ComplexJet im(const ComplexJet& a) { return (a - conj(a)) * cplx(0.0, -0.5); }
ComplexJet abs2(const ComplexJet& a) { return a * conj(a); }

ComplexJet to_complex(const RealJet& a) {
  ComplexJet r(a.space_ptr(), a.order(), a.basis());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  return r;
}

RealJet real_part(const ComplexJet& a) {
  RealJet r(a.space_ptr(), a.order(), a.basis());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i].real();
  return r;
}

double max_imag(const ComplexJet& a) {
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i].imag()));
  return m;
}

ComplexJet wirtinger_transform(const ComplexJet& a) {
  if (a.basis() != JetBasis::real) {
    fail(ErrorKind::invalid_argument, "Wirtinger transform expects a real-coordinate jet");
  }
  ComplexJet r(a.space_ptr(), a.order(), JetBasis::wirtinger);
  for (size_t i = 0; i < r.size(); ++i) {
    cplx s(0.0);
    for (const auto& t : a.space().wirtinger_row(static_cast<int>(i))) s += t.weight * a[t.source];
    r[i] = s;
  }
  return r;
}

ComplexJet wirtinger_transform(const RealJet& a) { return wirtinger_transform(to_complex(a)); }

#define FINSLER_INSTANTIATE_JET(T)                                          \
  template class Jet<T>;                                                    \
  template Jet<T> operator*(const Jet<T>&, const Jet<T>&);                  \
  template Jet<T> operator/(const Jet<T>&, const Jet<T>&);                  \
  template Jet<T> compose(const Jet<T>&, const std::array<T, kMaxJetOrder + 1>&); \
  template Jet<T> reciprocal(const Jet<T>&);                                \
  template Jet<T> pow_real(const Jet<T>&, double);                          \
  template Jet<T> sqrt(const Jet<T>&);                                      \
  template Jet<T> log(const Jet<T>&);                                       \
  template Jet<T> exp(const Jet<T>&);

FINSLER_INSTANTIATE_JET(double)
FINSLER_INSTANTIATE_JET(cplx)

}  // namespace finsler
