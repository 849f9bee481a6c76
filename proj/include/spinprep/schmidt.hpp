#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <type_traits>
#include <utility>

#include "spinprep/heisenberg.hpp"
#include "spinprep/optim.hpp"
#include "spinprep/qmath.hpp"
#include "spinprep/types.hpp"

namespace spinprep {

// c1 |alpha1>|beta1> + c2 |alpha2>|beta2> with c1 >= c2 >= 0 and each pair
// orthonormal.
template <typename Real = double>
struct SchmidtFormT {
  Real c1{};
  Real c2{};
  Vec2T<Real> alpha1, alpha2;
  Vec2T<Real> beta1, beta2;

  TwoQubitStateT<Real> reconstruct() const {
    return c1 * product_state<Real>(alpha1, beta1) + c2 * product_state<Real>(alpha2, beta2);
  }
};

using SchmidtForm = SchmidtFormT<double>;

// Amplitude matrix with rows indexed by spin 1 and columns by spin 2.
template <typename Real>
Mat2T<Real> amplitude_matrix(const TwoQubitStateT<Real>& state) {
  Mat2T<Real> m;
  m << state(0), state(1), state(2), state(3);
  return m;
}

template <typename Real>
SchmidtFormT<Real> decompose(const TwoQubitStateT<Real>& state) {
  if (!is_finite(state)) throw std::invalid_argument("decompose: non-finite state");
  const Real norm = state.norm();
  if (std::abs(norm - Real(1)) > Real(1e-6)) throw std::invalid_argument("decompose: state is not unit norm");
  const Svd2T<Real> sv = svd2<Real>(amplitude_matrix<Real>((state / norm).eval()));
  SchmidtFormT<Real> f;
  f.c1 = sv.singular_values(0);
  f.c2 = sv.singular_values(1);
  f.alpha1 = sv.u.col(0);
  f.alpha2 = sv.u.col(1);
  f.beta1 = sv.v.col(0).conjugate();
  f.beta2 = sv.v.col(1).conjugate();
  return f;
}

// |<a|b>|^2, insensitive to global phase.
template <typename Real>
Real fidelity_states(const TwoQubitStateT<Real>& a, const TwoQubitStateT<Real>& b) {
  return std::norm(a.dot(b));
}

enum class Spin : int { one = 1, two = 2 };

// Modulus and atan2-resolved angle of the diagonal pulse amplitude:
// (|alpha|, gamma) for spin 1, (|beta'|, eta) for spin 2. Both obey
// modulus = sqrt(cos^2 chi + sin^2 chi cos^2 theta), tan angle = tan chi cos theta.
template <typename Real = double>
struct PulseAngleFragmentT {
  Real modulus{};
  Real angle{};
};

using PulseAngleFragment = PulseAngleFragmentT<double>;

template <typename Real>
PulseAngleFragmentT<Real> pulse_angles_from_params(const PulseParamsT<Real>& p, Spin /*which*/) {
  const Real c = std::cos(p.chi);
  const Real sc = std::sin(p.chi) * std::cos(p.theta);
  return {std::hypot(c, sc), std::atan2(sc, c)};
}

template <typename Real = double>
struct PulseAngleSolutionT {
  Real abs_alpha{};
  Real gamma{};
  Real abs_betaP{};
  Real eta{};
  Real phi1{};
  Real phi2{};
};

using PulseAngleSolution = PulseAngleSolutionT<double>;

template <typename Real>
PulseAngleSolutionT<Real> pulse_angle_solution(const PulseParamsT<Real>& p1,
                                               const PulseParamsT<Real>& p2) {
  const auto a = pulse_angles_from_params(p1, Spin::one);
  const auto b = pulse_angles_from_params(p2, Spin::two);
  return {a.modulus, a.angle, b.modulus, b.angle, p1.phi, p2.phi};
}

// Whether sin^2(chi1) >= |alpha'|^2, i.e. the off-diagonal pulse amplitude
// can reach the requested modulus. The tolerance absorbs representation
// error at the boundary (sin^2(pi/6) sits one ulp below 0.25).
template <typename Real>
bool gamma_feasible(Real chi1, Real abs_alphaP, Real tol = Real(1e-12)) {
  if (abs_alphaP < Real(0) || abs_alphaP > Real(1))
    throw std::invalid_argument("gamma_feasible: modulus outside [0,1]");
  const Real s = std::sin(chi1);
  return s * s >= abs_alphaP * abs_alphaP - tol;
}

// Recover (chi, theta, phi) from u = cos(chi) - i sin(chi) sigma.n, taking
// the branch with sin(chi) >= 0 and theta in [0, pi].
template <typename Real>
PulseParamsT<Real> su2_to_pulse(const Mat2T<Real>& u) {
  const Real re00 = u(0, 0).real();
  const Real im00 = u(0, 0).imag();
  const Real off = std::abs(u(1, 0));
  const Real chi = std::atan2(std::hypot(im00, off), re00);
  const Real theta = std::atan2(off, -im00);
  Real phi = 0;
  if (off > Real(0)) phi = std::arg(ComplexT<Real>(0, 1) * u(1, 0));
  return PulseParamsT<Real>(chi, theta, phi);
}

template <typename Real = double>
struct SynthesisResultT {
  PreparationPlanT<Real> plan;
  Real global_phase{};        // arg <target|prepare(plan)>
  Real residual_fidelity{};   // |<target|prepare(plan)>|^2, recomputed from the plan
  bool used_refinement{};     // numerical fallback engaged after the closed form
  bool feasibility_ok{};      // gamma_feasible held for the extracted pulses
};

using SynthesisResult = SynthesisResultT<double>;

class SynthesisFailed : public std::runtime_error {
 public:
  SynthesisFailed(const std::string& what, SynthesisResult best)
      : std::runtime_error(what), best_result(std::move(best)) {}
  SynthesisResult best_result;  // best plan found, residual included
};

inline constexpr double kSynthesisFidelityThreshold = 1.0 - 1e-9;
inline constexpr int kSynthesisRefinementBudget = 2000;

namespace detail {

template <typename Real>
SynthesisResultT<Real> score_plan(const TwoQubitStateT<Real>& target,
                                  const PreparationPlanT<Real>& plan) {
  const TwoQubitStateT<Real> got = prepare(plan);
  const ComplexT<Real> ov = target.dot(got);
  SynthesisResultT<Real> r;
  r.plan = plan;
  r.global_phase = std::arg(ov);
  r.residual_fidelity = std::norm(ov);
  r.feasibility_ok =
      gamma_feasible(plan.pulse1.chi, std::abs(std::sin(plan.pulse1.chi) * std::sin(plan.pulse1.theta))) &&
      gamma_feasible(plan.pulse2.chi, std::abs(std::sin(plan.pulse2.chi) * std::sin(plan.pulse2.theta)));
  return r;
}

}  // namespace detail

// Inverse of prepare: build a plan whose prepared state matches the target
// up to the reported global phase. The closed form matches the Schmidt
// pairs of the target to the pulse columns (free evolution fixes the
// coefficients, phase alignment fixes the remaining gauge), so it is exact
// for every unit target; the bounded simplex refinement is kept as a
// safety net and engages only below the fidelity threshold.
template <typename Real>
SynthesisResultT<Real> synthesize(const TwoQubitStateT<Real>& target, Real A) {
  if (!std::isfinite(A) || A == Real(0)) throw std::invalid_argument("synthesize: coupling must be nonzero");
  if (!is_finite(target)) throw std::invalid_argument("synthesize: non-finite target");
  const Real norm = target.norm();
  if (std::abs(norm - Real(1)) > Real(1e-6)) throw std::invalid_argument("synthesize: target is not unit norm");
  const TwoQubitStateT<Real> t = target / norm;
  constexpr Real pi = std::numbers::pi_v<Real>;

  const SchmidtFormT<Real> f = decompose<Real>(t);
  const Real c1 = std::min(Real(1), f.c1);

  PreparationPlanT<Real> plan;
  plan.coupling_A = A;
  plan.t1 = Real(2) * std::acos(c1) / std::abs(A);

  // Second columns of the pulse unitaries are fixed by unitarity, so the
  // misalignment phases live in <alpha2|orth(alpha1)> and <beta2|orth(beta1)>.
  const Real da = overlap_phase(f.alpha2, orthogonal_state<Real>(f.alpha1));
  const Real db = overlap_phase(f.beta2, orthogonal_state<Real>(f.beta1));
  // sin(A t1 / 2) lands on -c2 for A < 0; the extra pi re-absorbs that sign.
  // A vanishing second term makes the alignment phase pure gauge; zero keeps
  // product-state targets on the zero-pulse plan.
  const Real s =
      f.c2 <= Real(1e-12) ? Real(0) : (pi / 2 + da + db + (A < Real(0) ? pi : Real(0))) / 2;

  Mat2T<Real> u1, u2;
  u1.col(0) = f.alpha1;
  u1.col(1) = orthogonal_state<Real>(f.alpha1);
  const ComplexT<Real> es = std::exp(ComplexT<Real>(0, s));
  u2.col(1) = es * f.beta1;
  u2.col(0) = -orthogonal_state<Real>((es * f.beta1).eval());

  plan.pulse1 = su2_to_pulse<Real>(u1);
  plan.pulse2 = su2_to_pulse<Real>(u2);

  SynthesisResultT<Real> best = detail::score_plan(t, plan);

  if (best.residual_fidelity < Real(kSynthesisFidelityThreshold)) {
    using VecX = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
    VecX x0(7);
    x0 << plan.t1, plan.pulse1.chi, plan.pulse1.theta, plan.pulse1.phi, plan.pulse2.chi,
        plan.pulse2.theta, plan.pulse2.phi;
    auto objective = [&](const VecX& x) {
      PreparationPlanT<Real> cand;
      cand.coupling_A = A;
      cand.t1 = std::abs(x(0));
      cand.pulse1 = PulseParamsT<Real>(x(1), x(2), x(3));
      cand.pulse2 = PulseParamsT<Real>(x(4), x(5), x(6));
      return Real(1) - fidelity_states<Real>(t, prepare(cand));
    };
    const auto nm = nelder_mead<Real>(objective, x0, Real(0.1), kSynthesisRefinementBudget, Real(1e-15));
    PreparationPlanT<Real> refined;
    refined.coupling_A = A;
    refined.t1 = std::abs(nm.x(0));
    refined.pulse1 = PulseParamsT<Real>(nm.x(1), nm.x(2), nm.x(3));
    refined.pulse2 = PulseParamsT<Real>(nm.x(4), nm.x(5), nm.x(6));
    SynthesisResultT<Real> r = detail::score_plan(t, refined);
    r.used_refinement = true;
    if (r.residual_fidelity > best.residual_fidelity) best = r;
    best.used_refinement = true;
    if (best.residual_fidelity < Real(kSynthesisFidelityThreshold)) {
      if constexpr (std::is_same_v<Real, double>) {
        throw SynthesisFailed("synthesize: residual fidelity below threshold", best);
      } else {
        throw std::runtime_error("synthesize: residual fidelity below threshold");
      }
    }
  }
  return best;
}

// Uniform state sampling: four complex amplitudes from eight independent
// standard normals, then normalized.
template <typename Real = double, typename URBG>
TwoQubitStateT<Real> haar_random_state(URBG& rng) {
  std::normal_distribution<Real> normal(Real(0), Real(1));
  TwoQubitStateT<Real> v;
  for (int i = 0; i < 4; ++i) {
    const Real re = normal(rng);
    const Real im = normal(rng);
    v(i) = ComplexT<Real>(re, im);
  }
  v /= v.norm();
  return v;
}

}  // namespace spinprep
