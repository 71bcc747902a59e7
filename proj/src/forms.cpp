#include "finsler/forms.hpp"

#include <bit>
#include <cmath>

namespace finsler {

namespace {

// Sign of reordering e_A ^ e_B into increasing slot order.
int merge_sign(uint32_t a, uint32_t b) {
  int swaps = 0;
  while (b) {
    const int j = std::countr_zero(b);
    b &= b - 1;
    swaps += std::popcount(a >> (j + 1));
  }
  return (swaps & 1) ? -1 : 1;
}

}  // namespace

Form Form::basis(int n, int slot, const ComplexJet& coefficient) {
  Form f(n);
  f.terms_.emplace(1u << slot, coefficient);
  return f;
}

void Form::add(uint32_t key, const ComplexJet& c) {
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    terms_.emplace(key, c);
  } else {
    it->second += c;
  }
}

Form& Form::operator+=(const Form& o) {
  if (n_ == 0) n_ = o.n_;
  for (const auto& [k, c] : o.terms_) add(k, c);
  return *this;
}

Form& Form::operator-=(const Form& o) {
  if (n_ == 0) n_ = o.n_;
  for (const auto& [k, c] : o.terms_) add(k, -c);
  return *this;
}

Form Form::operator-() const {
  Form r(n_);
  for (const auto& [k, c] : terms_) r.terms_.emplace(k, -c);
  return r;
}

double Form::max_abs() const {
  double m = 0.0;
  for (const auto& [k, c] : terms_) m = std::max(m, std::abs(c.value()));
  return m;
}

cplx Form::component(uint32_t key) const {
  auto it = terms_.find(key);
  return it == terms_.end() ? cplx(0.0) : it->second.value();
}

Form Form::restricted(uint32_t allowed_slots) const {
  Form r(n_);
  for (const auto& [k, c] : terms_) {
    if ((k & ~allowed_slots) == 0) r.terms_.emplace(k, c);
  }
  return r;
}

Form operator+(Form a, const Form& b) { return a += b; }
Form operator-(Form a, const Form& b) { return a -= b; }

Form operator*(const ComplexJet& c, const Form& f) {
  Form r(f.dim());
  for (const auto& [k, t] : f.terms()) r.add(k, c * t);
  return r;
}

Form wedge(const Form& a, const Form& b) {
  Form r(std::max(a.dim(), b.dim()));
  for (const auto& [ka, ca] : a.terms()) {
    for (const auto& [kb, cb] : b.terms()) {
      if (ka & kb) continue;
      ComplexJet p = ca * cb;
      if (merge_sign(ka, kb) < 0) p = -p;
      r.add(ka | kb, p);
    }
  }
  return r;
}

FrameCalculus::FrameCalculus(const ConnectionJets& cj) : cj_(cj) {
  const int n = cj.n;
  omega_.resize(n * n, Form(n));
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      Form w(n);
      for (int m = 0; m < n; ++m) {
        w += one(slot_dz(n, m), cj.mixed_at(a, b, m));
        w += one(slot_psi(n, m), cj.vertical_at(a, b, m));
      }
      omega_[a * n + b] = w;
    }
  }
  dpsi_.resize(n, Form(n));
  dpsibar_.resize(n, Form(n));
  for (int a = 0; a < n; ++a) {
    for (int m = 0; m < n; ++m) {
      dpsi_[a] += wedge(d(cj.gamma_at(a, m)), one(slot_dz(n, m)));
      dpsibar_[a] += wedge(d(cj.gamma_conj[a * n + m]), one(slot_dzbar(n, m)));
    }
  }
}

Form FrameCalculus::one(int slot) const {
  const ComplexJet& G = cj_.G();
  return one(slot, ComplexJet::constant(G.space_ptr(), G.order(), JetBasis::wirtinger, 1.0));
}

Form FrameCalculus::d(const ComplexJet& f) const {
  const int n = cj_.n;
  Form r(n);
  for (int m = 0; m < n; ++m) {
    r += one(slot_dz(n, m), cj_.delta(m, f));
    r += one(slot_psi(n, m), cj_.vdot(m, f));
    r += one(slot_dzbar(n, m), cj_.delta_bar(m, f));
    r += one(slot_psibar(n, m), cj_.vdot_bar(m, f));
  }
  return r;
}

Form FrameCalculus::d_basis(uint32_t key) const {
  const int n = cj_.n;
  Form r(n);
  if (key == 0) return r;
  const int i = std::countr_zero(key);
  const uint32_t rest = key & (key - 1);
  Form first_d(n);
  if (i >= n && i < 2 * n) first_d = dpsi_[i - n];
  if (i >= 3 * n) first_d = dpsibar_[i - 3 * n];
  if (rest == 0) return first_d;
  Form rest_form(n);
  {
    const ComplexJet& G = cj_.G();
    rest_form.add(rest, ComplexJet::constant(G.space_ptr(), G.order(), JetBasis::wirtinger, 1.0));
  }
  r += wedge(first_d, rest_form);
  r -= wedge(one(i), d_basis(rest));
  return r;
}

Form FrameCalculus::d(const Form& f) const {
  const int n = cj_.n;
  Form r(n);
  for (const auto& [k, c] : f.terms()) {
    Form e(n);
    const ComplexJet& G = cj_.G();
    e.add(k, ComplexJet::constant(G.space_ptr(), G.order(), JetBasis::wirtinger, 1.0));
    r += wedge(d(c), e);
    r += c * d_basis(k);
  }
  return r;
}

}  // namespace finsler
