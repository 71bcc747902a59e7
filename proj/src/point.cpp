#include "finsler/point.hpp"

#include <cmath>
#include <sstream>

#include "finsler/errors.hpp"

namespace finsler {

FinslerPoint::FinslerPoint(CVector z_, CVector v_) : z(std::move(z_)), v(std::move(v_)) {}

FinslerPoint::FinslerPoint(std::initializer_list<cplx> z_, std::initializer_list<cplx> v_)
    : z(static_cast<Eigen::Index>(z_.size())), v(static_cast<Eigen::Index>(v_.size())) {
  Eigen::Index i = 0;
  for (cplx c : z_) z(i++) = c;
  i = 0;
  for (cplx c : v_) v(i++) = c;
}

void validate_point(const FinslerPoint& p) {
  if (p.z.size() == 0 || p.z.size() != p.v.size()) {
    fail(ErrorKind::invalid_argument, "point needs matching, nonempty z and v");
  }
  if (!p.z.allFinite() || !p.v.allFinite()) {
    fail(ErrorKind::invalid_argument, "point has non-finite coordinates");
  }
  if (p.v.norm() == 0.0) fail(ErrorKind::invalid_argument, "fibre vector v must be nonzero");
}

Tensor::Tensor(int n, int rank) : n_(n), rank_(rank) {
  size_t s = 1;
  for (int i = 0; i < rank; ++i) s *= static_cast<size_t>(n);
  data_.assign(s, cplx(0.0));
}

double Tensor::max_abs() const {
  double m = 0.0;
  for (const auto& c : data_) m = std::max(m, std::abs(c));
  return m;
}

Tensor Tensor::operator-(const Tensor& o) const {
  Tensor r = *this;
  for (size_t i = 0; i < data_.size(); ++i) r.data_[i] -= o.data_[i];
  return r;
}

cplx hermitian_form(const CMatrix& levi, const CVector& h, const CVector& k) {
  // <H, K> = G_{a bbar} H^a conj(K^b)
  return (h.transpose() * levi * k.conjugate())(0, 0);
}

std::string format_complex(cplx c) {
  std::ostringstream os;
  os.precision(17);
  os << c.real();
  if (c.imag() != 0.0) os << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i";
  return os.str();
}

}  // namespace finsler
