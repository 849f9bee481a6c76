#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "spinprep/donor.hpp"
#include "spinprep/qmath.hpp"
#include "spinprep/types.hpp"

namespace spinprep {

// The balanced flip-flop gate: corner phases set by the gyromagnetic
// ratio g = (gamma_e - gamma_n)/(gamma_e + gamma_n), middle block
// -(i/sqrt2) e^{i pi/(4 sqrt2)} [[1,1],[1,-1]]. Equals the z-field
// propagator at Bz = A/(gamma_e+gamma_n), t = pi/(sqrt2 A).
template <typename Real>
Mat4T<Real> gate_W(const DonorParamsT<Real>& d) {
  using C = ComplexT<Real>;
  constexpr Real pi = std::numbers::pi_v<Real>;
  const Real sqrt2 = std::sqrt(Real(2));
  const Real g = (d.gamma_e - d.gamma_n) / (d.gamma_e + d.gamma_n);
  Mat4T<Real> w = Mat4T<Real>::Zero();
  w(0, 0) = std::exp(C(0, -(pi / (2 * sqrt2)) * (g + Real(0.5))));
  w(3, 3) = std::exp(C(0, (pi / (2 * sqrt2)) * (g - Real(0.5))));
  const C mid = C(0, -1) / sqrt2 * std::exp(C(0, pi / (4 * sqrt2)));
  w(1, 1) = mid;
  w(1, 2) = mid;
  w(2, 1) = mid;
  w(2, 2) = -mid;
  return w;
}

// (1/4) Re Tr[w^dag u]; both arguments must be unitary.
template <typename Real>
Real fidelity_trace(const Mat4T<Real>& u, const Mat4T<Real>& w, Real tol = 1e-10) {
  if (!is_unitary(u, tol)) throw std::invalid_argument("fidelity_trace: first argument not unitary");
  if (!is_unitary(w, tol)) throw std::invalid_argument("fidelity_trace: second argument not unitary");
  return (w.adjoint() * u).trace().real() / 4;
}

namespace detail {

template <typename Real>
Real entangling_field(const DonorParamsT<Real>& d) {
  return d.hyperfine_A / (d.gamma_e + d.gamma_n);
}

}  // namespace detail

// Closed-form gate fidelity at the entangling field Bz = A/(gamma_e+gamma_n):
// (1/2) cos(At/4 - pi/(4 sqrt2)) (cos(g(At/2 - pi/(2 sqrt2))) + sin(At/sqrt2)).
template <typename Real>
Real fidelity_analytic(const DonorParamsT<Real>& d, Real t) {
  if (!std::isfinite(t)) throw std::invalid_argument("fidelity_analytic: non-finite time");
  if (t < Real(0)) throw std::invalid_argument("fidelity_analytic: negative time");
  constexpr Real pi = std::numbers::pi_v<Real>;
  const Real sqrt2 = std::sqrt(Real(2));
  const Real A = d.hyperfine_A;
  const Real g = (d.gamma_e - d.gamma_n) / (d.gamma_e + d.gamma_n);
  return Real(0.5) * std::cos(A * t / 4 - pi / (4 * sqrt2)) *
         (std::cos(g * (A * t / 2 - pi / (2 * sqrt2))) + std::sin(A * t / sqrt2));
}

// The closed form is only valid at the entangling field; any other Bz is a
// domain error, guarded relative to that field's magnitude.
template <typename Real>
Real fidelity_analytic(const DonorParamsT<Real>& d, Real t, Real Bz) {
  const Real bstar = detail::entangling_field(d);
  if (std::abs(Bz - bstar) > Real(1e-9) * std::max(std::abs(bstar), Real(1e-300)))
    throw std::domain_error("fidelity_analytic: field differs from the entangling value");
  return fidelity_analytic(d, t);
}

template <typename Real = double>
struct FidelityCurveT {
  std::vector<std::pair<Real, Real>> samples;  // (t seconds, F), t strictly increasing
  DonorParamsT<Real> params;
};

using FidelityCurve = FidelityCurveT<double>;

template <typename Real>
FidelityCurveT<Real> fidelity_curve(const DonorParamsT<Real>& d, Real t_max, int n) {
  if (!(std::isfinite(t_max) && t_max > Real(0)))
    throw std::invalid_argument("fidelity_curve: t_max must be positive");
  if (n < 2) throw std::invalid_argument("fidelity_curve: need at least two samples");
  FidelityCurveT<Real> curve;
  curve.params = d;
  curve.samples.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const Real t = t_max * Real(i) / Real(n - 1);
    curve.samples.emplace_back(t, fidelity_analytic(d, t));
  }
  return curve;
}

template <typename Real = double>
struct FidelityPeakT {
  Real t{};
  Real value{};
  int grid_index{};  // argmax on the sampling grid before refinement
};

using FidelityPeak = FidelityPeakT<double>;

// Grid argmax plus ternary refinement in the bracketing interval; the
// refined peak resolves the 1 - O(1e-7) bias of a 1024-point grid down to
// machine precision.
template <typename Real>
FidelityPeakT<Real> find_fidelity_peak(const DonorParamsT<Real>& d, Real t_max, int n = 1024) {
  const FidelityCurveT<Real> curve = fidelity_curve(d, t_max, n);
  int best = 0;
  for (int i = 1; i < n; ++i)
    if (curve.samples[i].second > curve.samples[best].second) best = i;
  Real lo = curve.samples[best > 0 ? best - 1 : 0].first;
  Real hi = curve.samples[best + 1 < n ? best + 1 : n - 1].first;
  for (int iter = 0; iter < 200 && hi - lo > Real(1e-18) * t_max; ++iter) {
    const Real m1 = lo + (hi - lo) / 3;
    const Real m2 = hi - (hi - lo) / 3;
    if (fidelity_analytic(d, m1) < fidelity_analytic(d, m2))
      lo = m1;
    else
      hi = m2;
  }
  const Real t = (lo + hi) / 2;
  return {t, fidelity_analytic(d, t), best};
}

}  // namespace spinprep
