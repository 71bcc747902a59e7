#pragma once

#include <cstdint>
#include <map>

#include "finsler/connection.hpp"

namespace finsler {

/// Exterior forms on the adapted coframe (dz^mu, psi^a, dzbar^mu, psibar^a)
/// with jet coefficients. Coframe slot k is bit k of the key:
/// dz^mu -> mu, psi^a -> n + a, dzbar^mu -> 2n + mu, psibar^a -> 3n + a.
class Form {
 public:
  Form() = default;
  explicit Form(int n) : n_(n) {}

  static Form basis(int n, int slot, const ComplexJet& coefficient);

  int dim() const { return n_; }
  const std::map<uint32_t, ComplexJet>& terms() const { return terms_; }

  void add(uint32_t key, const ComplexJet& c);
  Form& operator+=(const Form& o);
  Form& operator-=(const Form& o);
  Form operator-() const;

  /// Largest |value| over all components.
  double max_abs() const;
  cplx component(uint32_t key) const;
  /// Keep only components whose key lies in `mask`-restricted type (bits outside mask absent).
  Form restricted(uint32_t allowed_slots) const;

 private:
  int n_ = 0;
  std::map<uint32_t, ComplexJet> terms_;
};

Form operator+(Form a, const Form& b);
Form operator-(Form a, const Form& b);
Form operator*(const ComplexJet& c, const Form& f);
Form wedge(const Form& a, const Form& b);

inline int slot_dz(int n, int mu) { (void)n; return mu; }
inline int slot_psi(int n, int a) { return n + a; }
inline int slot_dzbar(int n, int mu) { return 2 * n + mu; }
inline int slot_psibar(int n, int a) { return 3 * n + a; }

/// Exterior calculus in the adapted frame of one point's connection jets.
class FrameCalculus {
 public:
  explicit FrameCalculus(const ConnectionJets& cj);

  Form d(const ComplexJet& f) const;
  Form d(const Form& f) const;
  Form one(int slot, const ComplexJet& c) const { return Form::basis(cj_.n, slot, c); }
  Form one(int slot) const;

  /// omega^a_b = Gamma^a_{b;m} dz^m + Gamma^a_{bc} psi^c
  const Form& omega(int a, int b) const { return omega_[a * cj_.n + b]; }
  /// d psi^a = d(Gamma^a_{;m}) ^ dz^m
  const Form& dpsi(int a) const { return dpsi_[a]; }
  const Form& dpsibar(int a) const { return dpsibar_[a]; }
  const ConnectionJets& jets() const { return cj_; }

 private:
  Form d_basis(uint32_t key) const;

  const ConnectionJets& cj_;
  std::vector<Form> omega_;
  std::vector<Form> dpsi_, dpsibar_;
};

}  // namespace finsler
