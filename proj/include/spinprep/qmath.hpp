#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "spinprep/types.hpp"

namespace spinprep {

enum class Axis : int { x = 0, y = 1, z = 2 };

template <typename Real = double>
Mat2T<Real> pauli(Axis a) {
  using C = ComplexT<Real>;
  Mat2T<Real> m;
  switch (a) {
    case Axis::x:
      m << C(0, 0), C(1, 0), C(1, 0), C(0, 0);
      break;
    case Axis::y:
      m << C(0, 0), C(0, -1), C(0, 1), C(0, 0);
      break;
    default:
      m << C(1, 0), C(0, 0), C(0, 0), C(-1, 0);
      break;
  }
  return m;
}

// sigma . n for the unit vector n = (sin t cos p, sin t sin p, cos t).
template <typename Real>
Mat2T<Real> pauli_along(Real theta, Real phi) {
  using C = ComplexT<Real>;
  const Real st = std::sin(theta);
  const Real ct = std::cos(theta);
  Mat2T<Real> m;
  m << C(ct, 0), st * std::exp(C(0, -phi)), st * std::exp(C(0, phi)), C(-ct, 0);
  return m;
}

template <typename DerivedA, typename DerivedB>
auto kron(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  return Eigen::kroneckerProduct(a.derived(), b.derived()).eval();
}

// |a> (x) |b> in the fixed basis order of TwoQubitStateT.
template <typename Real>
TwoQubitStateT<Real> product_state(const Vec2T<Real>& a, const Vec2T<Real>& b) {
  return kron(a, b);
}

template <typename DerivedA, typename DerivedB>
auto max_abs_diff(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  return (a.derived() - b.derived()).cwiseAbs().maxCoeff();
}

template <typename Derived>
bool is_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m,
                  typename Derived::RealScalar tol = 1e-12) {
  return (m.derived() - m.derived().adjoint()).cwiseAbs().maxCoeff() <= tol;
}

template <typename Derived>
bool is_unitary(const Eigen::MatrixBase<Derived>& m,
                typename Derived::RealScalar tol = 1e-12) {
  using Plain = typename Derived::PlainObject;
  const Plain id = Plain::Identity(m.rows(), m.cols());
  return ((m.derived().adjoint() * m.derived()) - id).cwiseAbs().maxCoeff() <= tol;
}

// exp(m) by scaling and squaring a plain Taylor series. Deliberately
// independent of any eigendecomposition so the two routes cross-check.
template <typename Derived>
typename Derived::PlainObject expm_taylor(const Eigen::MatrixBase<Derived>& m) {
  using Plain = typename Derived::PlainObject;
  using RealS = typename Derived::RealScalar;
  Plain a = m.derived();
  const RealS norm = a.norm();
  int squarings = 0;
  if (norm > RealS(0.25)) {
    squarings = static_cast<int>(std::ceil(std::log2(static_cast<double>(norm) / 0.25)));
    a /= std::pow(RealS(2), squarings);
  }
  Plain result = Plain::Identity(a.rows(), a.cols());
  Plain term = Plain::Identity(a.rows(), a.cols());
  for (int k = 1; k <= 64; ++k) {
    term = (term * a) / typename Derived::Scalar(k);
    result += term;
    if (term.norm() <= RealS(1e-20) * result.norm()) break;
  }
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

// exp(-i h t) for hermitian h via eigendecomposition. Falls back to the
// series route only if the solver fails to converge.
template <typename Derived, typename Real = typename Derived::RealScalar>
typename Derived::PlainObject expm_oracle(const Eigen::MatrixBase<Derived>& h, Real t,
                                          Real herm_tol = Real(1e-12)) {
  using Plain = typename Derived::PlainObject;
  using Scalar = typename Derived::Scalar;
  if (!is_finite(h)) throw std::invalid_argument("expm_oracle: non-finite matrix");
  if (!is_hermitian(h, herm_tol))
    throw std::invalid_argument("expm_oracle: matrix is not hermitian");
  Eigen::SelfAdjointEigenSolver<Plain> solver(h.derived());
  if (solver.info() != Eigen::Success)
    return expm_taylor((Scalar(0, -t) * h.derived()).eval());
  Eigen::Vector<Scalar, Plain::RowsAtCompileTime> phases(h.rows());
  for (Eigen::Index k = 0; k < h.rows(); ++k)
    phases(k) = std::exp(Scalar(0, -solver.eigenvalues()(k) * t));
  return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

// The unit vector orthogonal to v (for unit v), with the deterministic
// phase (-conj(v1), conj(v0)).
template <typename Real>
Vec2T<Real> orthogonal_state(const Vec2T<Real>& v) {
  return Vec2T<Real>(-std::conj(v(1)), std::conj(v(0)));
}

// arg <a|b>: the phase by which b leads a along their common direction.
template <typename DerivedA, typename DerivedB>
auto overlap_phase(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  return std::arg(a.derived().dot(b.derived()));
}

template <typename Real>
struct Svd2T {
  Eigen::Matrix<Real, 2, 1> singular_values;  // descending, nonnegative
  Mat2T<Real> u;
  Mat2T<Real> v;  // a = u * singular_values.asDiagonal() * v.adjoint()
};

using Svd2 = Svd2T<double>;

// SVD of a complex 2x2 with a deterministic gauge: the first component of
// each column of u with magnitude above tol is made real nonnegative, and
// the matching column of v absorbs the opposite phase.
template <typename Real>
Svd2T<Real> svd2(const Mat2T<Real>& a, Real tol = 1e-12) {
  if (!is_finite(a)) throw std::invalid_argument("svd2: non-finite matrix");
  Eigen::JacobiSVD<Mat2T<Real>> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Svd2T<Real> out;
  out.singular_values = svd.singularValues();
  out.u = svd.matrixU();
  out.v = svd.matrixV();
  for (int k = 0; k < 2; ++k) {
    int lead = (std::abs(out.u(0, k)) > tol) ? 0 : 1;
    const Real mag = std::abs(out.u(lead, k));
    if (mag <= tol) continue;
    const ComplexT<Real> phase = out.u(lead, k) / mag;
    out.u.col(k) *= std::conj(phase);
    out.v.col(k) *= std::conj(phase);
  }
  return out;
}

}  // namespace spinprep
