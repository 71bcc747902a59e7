#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <unordered_map>
#include <vector>

namespace finsler {

using cplx = std::complex<double>;

inline constexpr int kMaxJetOrder = 4;
inline constexpr int kMaxJetVars = 40;

/// Variables a jet is expanded in. Real jets use the real coordinates
/// (x^mu, y^mu, u^a, w^a); Wirtinger jets use the slots (z, zbar, v, vbar),
/// where pair c owns variables 2c (holomorphic) and 2c+1 (antiholomorphic).
enum class JetBasis { real, wirtinger };

/// Index tables shared by every jet over `nvars` variables, up to kMaxJetOrder.
///
/// Multi-indices are enumerated by degree, so the indices of degree <= k form a
/// prefix of length size(k) for every k.
class JetSpace {
 public:
  struct MulTerm {
    int k, i, j;
    double weight;  // multinomial factor m! / (i! j!)
  };
  struct LinearTerm {
    int source;
    cplx weight;
  };

  static std::shared_ptr<const JetSpace> get(int nvars);

  explicit JetSpace(int nvars);

  int nvars() const { return nvars_; }
  int size(int order) const { return sizes_[order]; }
  int degree(int idx) const { return static_cast<int>(vars_[idx].size()); }

  /// Sorted variable list of a multi-index (each variable repeated by its exponent).
  std::span<const int> variables(int idx) const { return vars_[idx]; }
  std::vector<int> exponents(int idx) const;

  /// Flat index of a sorted-or-unsorted variable list; -1 when degree exceeds the maximum.
  int index_of_vars(std::span<const int> vars) const;
  int index_of_exponents(std::span<const int> exponents) const;

  /// Index of m_idx + e_var (idx must have degree < kMaxJetOrder).
  int shift(int var, int idx) const { return shift_[static_cast<size_t>(var) * sizes_[kMaxJetOrder - 1] + idx]; }

  /// Leibniz terms producing every coefficient of degree <= order.
  std::span<const MulTerm> mul_terms(int order) const;

  /// Index obtained by swapping variables 2c <-> 2c+1.
  int conj_index(int idx) const { return conj_[idx]; }

  /// Row expressing a Wirtinger-slot derivative through real-coordinate derivatives.
  std::span<const LinearTerm> wirtinger_row(int idx) const;

 private:
  int nvars_;
  std::array<int, kMaxJetOrder + 1> sizes_{};
  std::vector<std::vector<int>> vars_;
  std::unordered_map<uint64_t, int> index_;
  std::vector<int> shift_;
  std::vector<MulTerm> mul_;
  std::array<size_t, kMaxJetOrder + 1> mul_end_{};
  std::vector<int> conj_;
  std::vector<LinearTerm> wirt_terms_;
  std::vector<size_t> wirt_offsets_;

  int lookup(uint64_t key) const;
};

/// Truncated Taylor jet storing derivative values (not factorial-normalised
/// coefficients): entry m holds the mixed partial D^m f at the expansion point.
template <typename T>
class Jet {
 public:
  Jet() = default;
  Jet(std::shared_ptr<const JetSpace> space, int order, JetBasis basis = JetBasis::real);

  static Jet constant(std::shared_ptr<const JetSpace> space, int order, JetBasis basis, T value);
  static Jet variable(std::shared_ptr<const JetSpace> space, int order, JetBasis basis, int var,
                      T value);

  int order() const { return order_; }
  int nvars() const { return space_->nvars(); }
  JetBasis basis() const { return basis_; }
  const JetSpace& space() const { return *space_; }
  const std::shared_ptr<const JetSpace>& space_ptr() const { return space_; }
  size_t size() const { return d_.size(); }

  T value() const { return d_[0]; }
  T& operator[](size_t idx) { return d_[idx]; }
  const T& operator[](size_t idx) const { return d_[idx]; }
  std::span<const T> data() const { return d_; }

  /// Mixed partial for a list of variables; zero beyond the stored order.
  T derivative(std::span<const int> vars) const;
  T derivative(std::initializer_list<int> vars) const {
    return derivative(std::span<const int>(vars.begin(), vars.size()));
  }

  /// Partial derivative as a jet of order - 1.
  Jet partial(int var) const;
  Jet truncated(int order) const;

  Jet operator-() const;
  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(T s);
  Jet& operator+=(T s) { d_[0] += s; return *this; }

  template <typename U>
  friend class Jet;

 private:
  std::shared_ptr<const JetSpace> space_;
  int order_ = 0;
  JetBasis basis_ = JetBasis::real;
  std::vector<T> d_;
};

using RealJet = Jet<double>;
using ComplexJet = Jet<cplx>;

template <typename T> Jet<T> operator+(Jet<T> a, const Jet<T>& b) { return a += b; }
template <typename T> Jet<T> operator-(Jet<T> a, const Jet<T>& b) { return a -= b; }
template <typename T> Jet<T> operator*(Jet<T> a, T s) { return a *= s; }
template <typename T> Jet<T> operator*(T s, Jet<T> a) { return a *= s; }
template <typename T> Jet<T> operator+(Jet<T> a, T s) { return a += s; }
template <typename T> Jet<T> operator-(Jet<T> a, T s) { return a += -s; }
template <typename T> Jet<T> operator+(T s, Jet<T> a) { return a += s; }
template <typename T> Jet<T> operator-(T s, const Jet<T>& a) { return -a + s; }

template <typename T> Jet<T> operator*(const Jet<T>& a, const Jet<T>& b);
template <typename T> Jet<T> operator/(const Jet<T>& a, const Jet<T>& b);

template <typename T> Jet<T> add(const Jet<T>& a, const Jet<T>& b) { return a + b; }
template <typename T> Jet<T> sub(const Jet<T>& a, const Jet<T>& b) { return a - b; }
template <typename T> Jet<T> mul(const Jet<T>& a, const Jet<T>& b) { return a * b; }
template <typename T> Jet<T> div(const Jet<T>& a, const Jet<T>& b) { return a / b; }

template <typename T> Jet<T> reciprocal(const Jet<T>& a);
template <typename T> Jet<T> pow_real(const Jet<T>& a, double p);
template <typename T> Jet<T> sqrt(const Jet<T>& a);
template <typename T> Jet<T> log(const Jet<T>& a);
template <typename T> Jet<T> exp(const Jet<T>& a);

/// Composition with a scalar function given its derivatives f^(k)(a0), k = 0..order.
template <typename T> Jet<T> compose(const Jet<T>& a, const std::array<T, kMaxJetOrder + 1>& f);

/// Complex conjugate; Wirtinger jets also swap holomorphic and antiholomorphic slots.
ComplexJet conj(const ComplexJet& a);
ComplexJet re(const ComplexJet& a);
ComplexJet im(const ComplexJet& a);
ComplexJet abs2(const ComplexJet& a);

ComplexJet to_complex(const RealJet& a);
/// Real part of a real-basis complex jet.
RealJet real_part(const ComplexJet& a);
/// Largest |imaginary part| over the entries of a real-basis complex jet.
double max_imag(const ComplexJet& a);

/// Convert a real-coordinate jet over 4n variables into the Wirtinger-slot jet
/// of the same order, using d/dz = (d/dx - i d/dy)/2 and d/dzbar = (d/dx + i d/dy)/2.
ComplexJet wirtinger_transform(const ComplexJet& a);
ComplexJet wirtinger_transform(const RealJet& a);

}  // namespace finsler
