#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "spinprep/donor.hpp"
#include "spinprep/qmath.hpp"
#include "spinprep/types.hpp"

namespace spinprep {

// Target relative phase chi between the flip-flop amplitudes, plus the
// field and duration that should realize it.
template <typename Real = double>
struct EntanglerSpecT {
  Real chi{};
  Real Bz{};
  Real t{};
};

using EntanglerSpec = EntanglerSpecT<double>;

// z-field evolution restricted to span{|ud>, |du>}, with the overall
// e^{i A t / 4} factor dropped:
// (cos(Omega t) - i (omega_-/Omega) sin(Omega t)) |ud> - i (A/(2 Omega)) sin(Omega t) |du>.
template <typename Real>
TwoQubitStateT<Real> subspace_state(const DonorParamsT<Real>& d, Real Bz, Real t) {
  if (!std::isfinite(t)) throw std::invalid_argument("subspace_state: non-finite time");
  if (t < Real(0)) throw std::invalid_argument("subspace_state: negative time");
  using C = ComplexT<Real>;
  const DerivedFrequenciesT<Real> fr = derive_frequencies(d, Bz);
  const Real sinc = (fr.Omega > Real(0)) ? std::sin(fr.Omega * t) / fr.Omega : t;
  TwoQubitStateT<Real> v = TwoQubitStateT<Real>::Zero();
  v(static_cast<int>(Ket::ud)) = C(std::cos(fr.Omega * t), -fr.omega_minus * sinc);
  v(static_cast<int>(Ket::du)) = C(0, -(d.hyperfine_A / 2) * sinc);
  return v;
}

// Field and minimal positive duration that balance the flip-flop
// amplitudes: Bz = A cos(chi)/(gamma_e + gamma_n) and
// t = (2/(A sqrt(1 + cos^2 chi))) arctan(sqrt(1 + 2 cot^2 chi)), the
// arctan taken in (0, pi/2] with the chi -> k*pi limit giving pi/2
// exactly. branch adds half-periods of Omega t for later solutions.
template <typename Real>
EntanglerSpecT<Real> solve_entangler(const DonorParamsT<Real>& d, Real chi, int branch = 0) {
  if (!std::isfinite(chi)) throw std::invalid_argument("solve_entangler: non-finite phase");
  if (!(d.hyperfine_A > Real(0)))
    throw std::domain_error("solve_entangler: requires positive hyperfine coupling");
  if (branch < 0) throw std::invalid_argument("solve_entangler: negative branch");
  constexpr Real pi = std::numbers::pi_v<Real>;
  const Real c = std::cos(chi);
  const Real s = std::sin(chi);
  Real angle;
  if (s == Real(0)) {
    angle = pi / 2;
  } else {
    const Real cot = c / s;
    angle = std::atan(std::sqrt(1 + 2 * cot * cot));
  }
  EntanglerSpecT<Real> spec;
  spec.chi = chi;
  spec.Bz = d.hyperfine_A * c / (d.gamma_e + d.gamma_n);
  const Real Omega = (d.hyperfine_A / 2) * std::sqrt(1 + c * c);
  spec.t = (angle + Real(branch) * pi) / Omega;
  return spec;
}

// Pure-state concurrence 2|a_uu a_dd - a_ud a_du|.
template <typename Real>
Real concurrence(const TwoQubitStateT<Real>& state) {
  return 2 * std::abs(state(0) * state(3) - state(1) * state(2));
}

template <typename Real = double>
struct EntanglerReportT {
  Real cot_residual{};          // phase condition in cleared form, dimensionless
  Real tan_residual{};          // duration condition in cleared form, dimensionless
  Real fidelity{};              // against the balanced state with the achieved phase
  Real achieved_phase{};        // arg(a_du) - arg(a_ud), wrapped to (-pi, pi]
  Real achieved_concurrence{};
  Real domain_margin{};         // (Omega^2 - 2 omega_-^2) / Omega^2
  bool domain_ok{};
  bool conditions_met{};
};

using EntanglerReport = EntanglerReportT<double>;

inline constexpr double kEntanglerConditionTol = 1e-9;
inline constexpr double kEntanglerDomainTol = 1e-12;

// Checks both balance conditions on the achieved state. The residuals are
// evaluated in cleared form
//   r_cot = |cos^2(chi') d - omega_-^2 sin^2(chi')| / Omega^2,
//   r_tan = |sin^2(Omega t) d - Omega^2 cos^2(Omega t)| / Omega^2,
// with d = Omega^2 - 2 omega_-^2, which stay finite and hit ~1e-16 at the
// solved points where the naive cot/sqrt forms cancel catastrophically.
template <typename Real>
EntanglerReportT<Real> verify_entangling_conditions(const DonorParamsT<Real>& d,
                                                    const EntanglerSpecT<Real>& spec) {
  constexpr Real pi = std::numbers::pi_v<Real>;
  const DerivedFrequenciesT<Real> fr = derive_frequencies(d, spec.Bz);
  const TwoQubitStateT<Real> state = subspace_state(d, spec.Bz, spec.t);

  EntanglerReportT<Real> rep;
  const Real omega2 = fr.Omega * fr.Omega;
  const Real dgap = omega2 - 2 * fr.omega_minus * fr.omega_minus;
  rep.domain_margin = (omega2 > Real(0)) ? dgap / omega2 : Real(0);
  rep.domain_ok = rep.domain_margin >= -Real(kEntanglerDomainTol);

  const ComplexT<Real> aud = state(static_cast<int>(Ket::ud));
  const ComplexT<Real> adu = state(static_cast<int>(Ket::du));
  if (std::abs(aud) > Real(1e-15) && std::abs(adu) > Real(1e-15)) {
    rep.achieved_phase = std::arg(adu) - std::arg(aud);
    if (rep.achieved_phase > pi) rep.achieved_phase -= 2 * pi;
    if (rep.achieved_phase <= -pi) rep.achieved_phase += 2 * pi;
  }

  const Real cp = std::cos(rep.achieved_phase);
  const Real sp = std::sin(rep.achieved_phase);
  const Real swt = std::sin(fr.Omega * spec.t);
  const Real cwt = std::cos(fr.Omega * spec.t);
  if (omega2 > Real(0)) {
    rep.cot_residual =
        std::abs(cp * cp * dgap - fr.omega_minus * fr.omega_minus * sp * sp) / omega2;
    rep.tan_residual = std::abs(swt * swt * dgap - omega2 * cwt * cwt) / omega2;
  }

  TwoQubitStateT<Real> balanced = TwoQubitStateT<Real>::Zero();
  balanced(static_cast<int>(Ket::ud)) = ComplexT<Real>(1 / std::sqrt(Real(2)), 0);
  balanced(static_cast<int>(Ket::du)) =
      std::exp(ComplexT<Real>(0, rep.achieved_phase)) / std::sqrt(Real(2));
  rep.fidelity = std::norm(balanced.dot(state));
  rep.achieved_concurrence = concurrence(state);

  rep.conditions_met = rep.domain_ok && rep.cot_residual <= Real(kEntanglerConditionTol) &&
                       rep.tan_residual <= Real(kEntanglerConditionTol) &&
                       rep.fidelity >= Real(1) - Real(kEntanglerConditionTol);
  return rep;
}

}  // namespace spinprep
