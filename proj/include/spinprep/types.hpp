#pragma once

#include <complex>

#include <Eigen/Dense>

namespace spinprep {

template <typename Real>
using ComplexT = std::complex<Real>;

template <typename Real>
using Mat2T = Eigen::Matrix<ComplexT<Real>, 2, 2>;
template <typename Real>
using Mat4T = Eigen::Matrix<ComplexT<Real>, 4, 4>;
template <typename Real>
using Vec2T = Eigen::Matrix<ComplexT<Real>, 2, 1>;
template <typename Real>
using Vec4T = Eigen::Matrix<ComplexT<Real>, 4, 1>;

// Two-qubit amplitudes in the fixed product basis (uu, ud, du, dd);
// the flat index of |i1 i2> is 2*i1 + i2 with u=0, d=1.
template <typename Real>
using TwoQubitStateT = Vec4T<Real>;

using Complex = ComplexT<double>;
using Mat2 = Mat2T<double>;
using Mat4 = Mat4T<double>;
using Vec2 = Vec2T<double>;
using Vec4 = Vec4T<double>;
using TwoQubitState = TwoQubitStateT<double>;

enum class Ket : int { uu = 0, ud = 1, du = 2, dd = 3 };

template <typename Real = double>
Vec4T<Real> basis_ket(Ket k) {
  Vec4T<Real> v = Vec4T<Real>::Zero();
  v(static_cast<int>(k)) = ComplexT<Real>(1, 0);
  return v;
}

template <typename Real = double>
Vec2T<Real> spin_up() {
  return Vec2T<Real>(ComplexT<Real>(1, 0), ComplexT<Real>(0, 0));
}

template <typename Real = double>
Vec2T<Real> spin_down() {
  return Vec2T<Real>(ComplexT<Real>(0, 0), ComplexT<Real>(1, 0));
}

}  // namespace spinprep
