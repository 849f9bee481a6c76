#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "spinprep/qmath.hpp"
#include "spinprep/types.hpp"

namespace spinprep {

// Simultaneous instantaneous rotation of one spin: exp(-i chi sigma.n) with
// n = (sin theta cos phi, sin theta sin phi, cos theta). chi is the pulse
// area; theta is clamped to [0, pi] and phi reduced mod 2*pi on construction.
template <typename Real = double>
struct PulseParamsT {
  Real chi{};
  Real theta{};
  Real phi{};

  PulseParamsT() = default;
  PulseParamsT(Real chi_, Real theta_, Real phi_) : chi(chi_) {
    if (!(std::isfinite(chi_) && std::isfinite(theta_) && std::isfinite(phi_)))
      throw std::invalid_argument("PulseParams: non-finite angle");
    constexpr Real two_pi = Real(2) * std::numbers::pi_v<Real>;
    theta = std::clamp(theta_, Real(0), std::numbers::pi_v<Real>);
    phi = std::fmod(phi_, two_pi);
    if (phi < Real(0)) phi += two_pi;
    if (phi >= two_pi) phi = Real(0);
  }
};

using PulseParams = PulseParamsT<double>;

// Exchange coupling A (signed, 1/s), free-evolution time t1 (s, >= 0), then
// one pulse per spin.
template <typename Real = double>
struct PreparationPlanT {
  Real coupling_A{};
  Real t1{};
  PulseParamsT<Real> pulse1;
  PulseParamsT<Real> pulse2;
};

using PreparationPlan = PreparationPlanT<double>;

// H = (A/4) (sigma1.sigma2 + 1): eigenvalue A/2 on the triplet, -A/2 on the
// singlet, H^2 = (A/2)^2.
template <typename Real>
Mat4T<Real> hamiltonian_isotropic(Real A) {
  if (!std::isfinite(A)) throw std::invalid_argument("hamiltonian_isotropic: non-finite coupling");
  using C = ComplexT<Real>;
  Mat4T<Real> h = Mat4T<Real>::Zero();
  const C half(A / 2, 0);
  h(0, 0) = half;
  h(1, 2) = half;
  h(2, 1) = half;
  h(3, 3) = half;
  return h;
}

// exp(-i H t) = cos(At/2) - i sin(At/2) (2/A) H; the A=0 limit is the
// identity (removable singularity).
template <typename Real>
Mat4T<Real> propagator_step1(Real A, Real t) {
  if (!std::isfinite(A) || !std::isfinite(t)) throw std::invalid_argument("propagator_step1: non-finite input");
  if (t < Real(0)) throw std::invalid_argument("propagator_step1: negative time");
  using C = ComplexT<Real>;
  const Real c = std::cos(A * t / 2);
  const Real s = std::sin(A * t / 2);
  Mat4T<Real> u = Mat4T<Real>::Zero();
  u(0, 0) = C(c, -s);
  u(3, 3) = C(c, -s);
  u(1, 1) = C(c, 0);
  u(2, 2) = C(c, 0);
  u(1, 2) = C(0, -s);
  u(2, 1) = C(0, -s);
  return u;
}

// Free evolution of |ud>: cos(At1/2)|ud> - i sin(At1/2)|du>.
template <typename Real>
TwoQubitStateT<Real> state_after_step1(Real A, Real t1) {
  if (!std::isfinite(A) || !std::isfinite(t1)) throw std::invalid_argument("state_after_step1: non-finite input");
  if (t1 < Real(0)) throw std::invalid_argument("state_after_step1: negative time");
  using C = ComplexT<Real>;
  TwoQubitStateT<Real> v = TwoQubitStateT<Real>::Zero();
  v(static_cast<int>(Ket::ud)) = C(std::cos(A * t1 / 2), 0);
  v(static_cast<int>(Ket::du)) = C(0, -std::sin(A * t1 / 2));
  return v;
}

// cos(chi) - i sin(chi) sigma.n, the instantaneous-pulse limit for one spin.
template <typename Real>
Mat2T<Real> pulse_rotation(const PulseParamsT<Real>& p) {
  const Real c = std::cos(p.chi);
  const Real s = std::sin(p.chi);
  Mat2T<Real> u = c * Mat2T<Real>::Identity() - ComplexT<Real>(0, s) * pauli_along(p.theta, p.phi);
  return u;
}

template <typename Real>
Mat4T<Real> pulse_unitary(const PulseParamsT<Real>& p1, const PulseParamsT<Real>& p2) {
  return kron(pulse_rotation(p1), pulse_rotation(p2));
}

template <typename Real>
TwoQubitStateT<Real> prepare(const PreparationPlanT<Real>& plan) {
  return pulse_unitary(plan.pulse1, plan.pulse2) * state_after_step1(plan.coupling_A, plan.t1);
}

}  // namespace spinprep
