#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "spinprep/qmath.hpp"
#include "spinprep/types.hpp"

namespace spinprep {

// Gyromagnetic ratios in 1/(s T) and hyperfine coupling in 1/s; all
// frequency symbols are plain 1/s numbers used directly in exponents.
template <typename Real = double>
struct DonorParamsT {
  Real gamma_e{};
  Real gamma_n{};
  Real hyperfine_A{};
};

using DonorParams = DonorParamsT<double>;

// Field magnitude B >= 0 (tesla) plus the direction angles; theta is
// clamped to [0, pi] and phi reduced mod 2*pi on construction.
template <typename Real = double>
struct FieldConfigT {
  Real B{};
  Real theta{};
  Real phi{};

  FieldConfigT() = default;
  FieldConfigT(Real B_, Real theta_, Real phi_) : B(B_) {
    if (!(std::isfinite(B_) && std::isfinite(theta_) && std::isfinite(phi_)))
      throw std::invalid_argument("FieldConfig: non-finite input");
    if (B_ < Real(0)) throw std::invalid_argument("FieldConfig: negative field magnitude");
    constexpr Real two_pi = Real(2) * std::numbers::pi_v<Real>;
    theta = std::clamp(theta_, Real(0), std::numbers::pi_v<Real>);
    phi = std::fmod(phi_, two_pi);
    if (phi < Real(0)) phi += two_pi;
    if (phi >= two_pi) phi = Real(0);
  }
};

using FieldConfig = FieldConfigT<double>;

template <typename Real = double>
struct DerivedFrequenciesT {
  Real omega_minus{};  // (gamma_e + gamma_n) Bz / 2
  Real omega_plus{};   // (gamma_e - gamma_n) Bz / 2
  Real Omega{};        // sqrt(omega_minus^2 + (A/2)^2)
  Real eta{};          // atan2(A, (gamma_e + gamma_n) Bz)
};

using DerivedFrequencies = DerivedFrequenciesT<double>;

// Bz is the signed z-component of the evolution field; a negative value
// means the field points along -z.
template <typename Real>
DerivedFrequenciesT<Real> derive_frequencies(const DonorParamsT<Real>& d, Real Bz) {
  if (!(std::isfinite(d.gamma_e) && std::isfinite(d.gamma_n) && std::isfinite(d.hyperfine_A) &&
        std::isfinite(Bz)))
    throw std::invalid_argument("derive_frequencies: non-finite input");
  DerivedFrequenciesT<Real> f;
  f.omega_minus = (d.gamma_e + d.gamma_n) * Bz / 2;
  f.omega_plus = (d.gamma_e - d.gamma_n) * Bz / 2;
  f.Omega = std::hypot(f.omega_minus, d.hyperfine_A / 2);
  f.eta = std::atan2(d.hyperfine_A, (d.gamma_e + d.gamma_n) * Bz);
  return f;
}

// S acts on the electron (first) slot, I on the nuclear (second) slot.
template <typename Real = double>
Mat4T<Real> spin_electron(Axis a) {
  return kron((Real(0.5) * pauli<Real>(a)).eval(), Mat2T<Real>::Identity().eval());
}

template <typename Real = double>
Mat4T<Real> spin_nuclear(Axis a) {
  return kron(Mat2T<Real>::Identity().eval(), (Real(0.5) * pauli<Real>(a)).eval());
}

// gamma_e B S.n - gamma_n B I.n + A S.I
template <typename Real>
Mat4T<Real> hamiltonian_full(const DonorParamsT<Real>& d, const FieldConfigT<Real>& f) {
  const Real nx = std::sin(f.theta) * std::cos(f.phi);
  const Real ny = std::sin(f.theta) * std::sin(f.phi);
  const Real nz = std::cos(f.theta);
  Mat4T<Real> h = Mat4T<Real>::Zero();
  const std::array<Real, 3> n = {nx, ny, nz};
  for (int i = 0; i < 3; ++i) {
    const Axis ax = static_cast<Axis>(i);
    h += d.gamma_e * f.B * n[i] * spin_electron<Real>(ax);
    h -= d.gamma_n * f.B * n[i] * spin_nuclear<Real>(ax);
    h += d.hyperfine_A * (spin_electron<Real>(ax) * spin_nuclear<Real>(ax));
  }
  return h;
}

// |+> = cos(t/2)|up> + sin(t/2)e^{ip}|down>, |-> = -sin(t/2)|up> + cos(t/2)e^{ip}|down>.
template <typename Real>
std::pair<Vec2T<Real>, Vec2T<Real>> dressed_basis(const FieldConfigT<Real>& f) {
  using C = ComplexT<Real>;
  const Real c = std::cos(f.theta / 2);
  const Real s = std::sin(f.theta / 2);
  const C ep = std::exp(C(0, f.phi));
  Vec2T<Real> plus(C(c, 0), s * ep);
  Vec2T<Real> minus(C(-s, 0), c * ep);
  return {plus, minus};
}

// Energies kept in the fixed labeling E1..E4 (not sorted), eigenvectors in
// the matching order.
template <typename Real = double>
struct SpectrumT {
  std::array<Real, 4> energies{};
  std::array<TwoQubitStateT<Real>, 4> states;
};

using Spectrum = SpectrumT<double>;

template <typename Real>
SpectrumT<Real> spectrum(const DonorParamsT<Real>& d, const FieldConfigT<Real>& f) {
  const Real A = d.hyperfine_A;
  const Real wp = (d.gamma_e - d.gamma_n) * f.B / 2;
  const Real wm = (d.gamma_e + d.gamma_n) * f.B / 2;
  const Real Omega = std::hypot(wm, A / 2);
  const Real eta = std::atan2(A, (d.gamma_e + d.gamma_n) * f.B);

  SpectrumT<Real> sp;
  sp.energies = {wp + A / 4, Omega - A / 4, -Omega - A / 4, -wp + A / 4};

  const auto [plus, minus] = dressed_basis(f);
  const TwoQubitStateT<Real> pm = product_state<Real>(plus, minus);
  const TwoQubitStateT<Real> mp = product_state<Real>(minus, plus);
  const Real ch = std::cos(eta / 2);
  const Real sh = std::sin(eta / 2);
  sp.states[0] = product_state<Real>(plus, plus);
  sp.states[1] = ch * pm + sh * mp;
  sp.states[2] = -sh * pm + ch * mp;
  sp.states[3] = product_state<Real>(minus, minus);
  return sp;
}

// max_k ||H psi_k - E_k psi_k|| normalized by max(1, ||H||_F), so the bound
// reads absolutely for O(1) Hamiltonians and relatively at lab scales.
template <typename Real>
Real spectrum_residual(const DonorParamsT<Real>& d, const FieldConfigT<Real>& f) {
  const Mat4T<Real> h = hamiltonian_full(d, f);
  const SpectrumT<Real> sp = spectrum(d, f);
  const Real scale = std::max(Real(1), h.norm());
  Real worst = 0;
  for (int k = 0; k < 4; ++k)
    worst = std::max(worst, (h * sp.states[k] - sp.energies[k] * sp.states[k]).norm() / scale);
  return worst;
}

// Factored propagator for the z-field Hamiltonian: diagonal corner phases
// times the flip-flop block rotation.
template <typename Real>
Mat4T<Real> split_propagator(const DonorParamsT<Real>& d, Real Bz, Real t) {
  if (!std::isfinite(t)) throw std::invalid_argument("split_propagator: non-finite time");
  if (t < Real(0)) throw std::invalid_argument("split_propagator: negative time");
  using C = ComplexT<Real>;
  const DerivedFrequenciesT<Real> fr = derive_frequencies(d, Bz);
  const Real A = d.hyperfine_A;

  Mat4T<Real> u1 = Mat4T<Real>::Zero();
  u1(0, 0) = std::exp(C(0, -(fr.omega_plus + A / 4) * t));
  u1(1, 1) = C(1, 0);
  u1(2, 2) = C(1, 0);
  u1(3, 3) = std::exp(C(0, (fr.omega_plus - A / 4) * t));

  const Real sinc = (fr.Omega > Real(0)) ? std::sin(fr.Omega * t) / fr.Omega : t;
  const Real cosw = std::cos(fr.Omega * t);
  const C ea = std::exp(C(0, A * t / 4));
  Mat4T<Real> u2 = Mat4T<Real>::Identity();
  u2(1, 1) = (C(cosw, 0) - C(0, fr.omega_minus * sinc)) * ea;
  u2(2, 2) = (C(cosw, 0) + C(0, fr.omega_minus * sinc)) * ea;
  u2(1, 2) = C(0, -(A / 2) * sinc) * ea;
  u2(2, 1) = u2(1, 2);

  return u1 * u2;
}

// The three commuting factors of the z-field propagator, in application
// order (flip-flop, zz, polarizing), each singularity-free at zero
// frequency.
template <typename Real>
std::array<Mat4T<Real>, 3> propagator_factors(const DonorParamsT<Real>& d, Real Bz, Real t) {
  if (!std::isfinite(t)) throw std::invalid_argument("propagator_factors: non-finite time");
  if (t < Real(0)) throw std::invalid_argument("propagator_factors: negative time");
  using C = ComplexT<Real>;
  const DerivedFrequenciesT<Real> fr = derive_frequencies(d, Bz);
  const Real A = d.hyperfine_A;

  const Mat4T<Real> sz_iz = spin_electron<Real>(Axis::z) * spin_nuclear<Real>(Axis::z);
  const Mat4T<Real> mid = Mat4T<Real>::Identity() - 4 * sz_iz;    // 2*(1/2 - 2 Sz Iz)
  const Mat4T<Real> outer = Mat4T<Real>::Identity() + 4 * sz_iz;  // 2*(1/2 + 2 Sz Iz)

  Mat4T<Real> hxy = fr.omega_minus * (spin_electron<Real>(Axis::z) - spin_nuclear<Real>(Axis::z));
  hxy += A * (spin_electron<Real>(Axis::x) * spin_nuclear<Real>(Axis::x) +
              spin_electron<Real>(Axis::y) * spin_nuclear<Real>(Axis::y));
  const Real sinc = (fr.Omega > Real(0)) ? std::sin(fr.Omega * t) / fr.Omega : t;
  Mat4T<Real> fxy = Mat4T<Real>::Identity() +
                    (std::cos(fr.Omega * t) - 1) * (Real(0.5) * mid) - C(0, sinc) * hxy;

  Mat4T<Real> fzz = std::cos(A * t / 4) * Mat4T<Real>::Identity() -
                    C(0, std::sin(A * t / 4)) * (4 * sz_iz);

  Mat4T<Real> fp = Mat4T<Real>::Identity() +
                   (std::cos(fr.omega_plus * t) - 1) * (Real(0.5) * outer) -
                   C(0, std::sin(fr.omega_plus * t)) *
                       (spin_electron<Real>(Axis::z) + spin_nuclear<Real>(Axis::z));

  return {fxy, fzz, fp};
}

// Closed-form z-field evolution of |+->, with the dressed pair built from
// the preparation angles (theta, phi). The printed -1 factors on the uu
// and du amplitudes are exact.
template <typename Real>
TwoQubitStateT<Real> evolve_from_plus_minus(const DonorParamsT<Real>& d, Real theta, Real phi,
                                            Real Bz, Real t) {
  if (!(std::isfinite(theta) && std::isfinite(phi) && std::isfinite(t)))
    throw std::invalid_argument("evolve_from_plus_minus: non-finite input");
  if (t < Real(0)) throw std::invalid_argument("evolve_from_plus_minus: negative time");
  using C = ComplexT<Real>;
  const DerivedFrequenciesT<Real> fr = derive_frequencies(d, Bz);
  const Real A = d.hyperfine_A;
  const Real c = std::cos(theta / 2);
  const Real s = std::sin(theta / 2);
  const Real cosw = std::cos(fr.Omega * t);
  const Real sinc = (fr.Omega > Real(0)) ? std::sin(fr.Omega * t) / fr.Omega : t;

  const C ea = std::exp(C(0, A * t / 4));
  const C eam = std::exp(C(0, -A * t / 4));
  const C ewm = std::exp(C(0, -fr.omega_plus * t));
  const C ewp = std::exp(C(0, fr.omega_plus * t));
  const C ip = std::exp(C(0, phi));

  TwoQubitStateT<Real> v;
  v(0) = ewm * eam * C(-1, 0) * (c * s);
  v(1) = ea * ip * (C(cosw * c * c, 0) + C(0, 1) * ((A / 2) * s * s - fr.omega_minus * c * c) * sinc);
  v(2) = ea * ip * C(-1, 0) *
         (C(cosw * s * s, 0) + C(0, 1) * ((A / 2) * c * c + fr.omega_minus * s * s) * sinc);
  v(3) = ewp * eam * ip * ip * (c * s);
  return v;
}

}  // namespace spinprep
