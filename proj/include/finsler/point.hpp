#pragma once

#include <Eigen/Dense>
#include <complex>
#include <initializer_list>
#include <string>
#include <vector>

namespace finsler {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// A point of the slit holomorphic tangent bundle: base point z and fibre vector v.
struct FinslerPoint {
  CVector z;
  CVector v;

  FinslerPoint() = default;
  FinslerPoint(CVector z_, CVector v_);
  FinslerPoint(std::initializer_list<cplx> z_, std::initializer_list<cplx> v_);

  int dim() const { return static_cast<int>(z.size()); }
  bool operator==(const FinslerPoint& o) const { return z == o.z && v == o.v; }
};

/// Throws invalid-argument unless z and v have equal nonzero size, finite entries and v != 0.
void validate_point(const FinslerPoint& p);

/// Horizontal vector H = H^mu delta_mu at a point.
struct HorizontalVector {
  FinslerPoint base;
  CVector components;
};

/// Tangent vector split into horizontal and vertical components, used by torsion contractions.
struct TangentVector {
  CVector horizontal;
  CVector vertical;
};

/// Dense complex tensor whose extents all equal n; row-major in the index order given.
class Tensor {
 public:
  Tensor() = default;
  Tensor(int n, int rank);

  int dim() const { return n_; }
  int rank() const { return rank_; }
  size_t size() const { return data_.size(); }

  template <typename... I>
  cplx& operator()(I... idx) {
    return data_[offset({static_cast<int>(idx)...})];
  }
  template <typename... I>
  const cplx& operator()(I... idx) const {
    return data_[offset({static_cast<int>(idx)...})];
  }
  cplx& flat(size_t i) { return data_[i]; }
  const cplx& flat(size_t i) const { return data_[i]; }

  double max_abs() const;
  Tensor operator-(const Tensor& o) const;

 private:
  size_t offset(std::initializer_list<int> idx) const {
    size_t off = 0;
    for (int i : idx) off = off * static_cast<size_t>(n_) + static_cast<size_t>(i);
    return off;
  }

  int n_ = 0;
  int rank_ = 0;
  std::vector<cplx> data_;
};

/// <H, K> = G_{a bbar} H^a conj(K^b) for a Levi matrix `levi`.
cplx hermitian_form(const CMatrix& levi, const CVector& h, const CVector& k);

std::string format_complex(cplx c);

}  // namespace finsler
