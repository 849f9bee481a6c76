#include <catch2/catch_amalgamated.hpp>

#include <numbers>

#include "spinprep/constants.hpp"
#include "spinprep/gate_fidelity.hpp"
#include "spinprep/schmidt.hpp"

using namespace spinprep;

namespace {

constexpr double kPi = std::numbers::pi;

DonorParams p31() { return ConstantsRegistry::p31().donor_params(); }

// Independently computed with 40-digit arithmetic from the preset constants.
constexpr double kTStar = 1.8901059040918770727e-8;
constexpr double kFZero = 0.18916289956372504618;

}  // namespace

TEST_CASE("target gate structure") {
  const DonorParams d = p31();
  const Mat4 w = gate_W(d);
  CHECK(is_unitary(w, 1e-14));

  const Complex middle_scale =
      Complex(0, -1 / std::sqrt(2.0)) * std::polar(1.0, kPi / (4 * std::sqrt(2.0)));
  CHECK(std::abs(w(1, 1) - middle_scale) < 1e-14);
  CHECK(std::abs(w(1, 2) - middle_scale) < 1e-14);
  CHECK(std::abs(w(2, 1) - middle_scale) < 1e-14);
  CHECK(std::abs(w(2, 2) + middle_scale) < 1e-14);
  CHECK(std::abs(w(0, 1)) == 0.0);
  CHECK(std::abs(w(3, 0)) == 0.0);

  const double g = (d.gamma_e - d.gamma_n) / (d.gamma_e + d.gamma_n);
  CHECK(std::abs(w(0, 0) - std::polar(1.0, -kPi / (2 * std::sqrt(2.0)) * (g + 0.5))) < 1e-14);
  CHECK(std::abs(w(3, 3) - std::polar(1.0, kPi / (2 * std::sqrt(2.0)) * (g - 0.5))) < 1e-14);
}

TEST_CASE("target gate maps the up-down ket to the triplet") {
  const DonorParams d = p31();
  TwoQubitState triplet0 = TwoQubitState::Zero();
  triplet0(1) = triplet0(2) = 1 / std::sqrt(2.0);
  const TwoQubitState got = (gate_W(d) * basis_ket(Ket::ud)).eval();
  CHECK(fidelity_states(got, triplet0) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("target gate equals the propagator at the entangling point") {
  const DonorParams d = p31();
  const double bstar = d.hyperfine_A / (d.gamma_e + d.gamma_n);
  const double tstar = kPi / (std::sqrt(2.0) * d.hyperfine_A);
  CHECK(max_abs_diff(gate_W(d), split_propagator(d, bstar, tstar)) < 1e-10);
}

TEST_CASE("trace fidelity basics") {
  const DonorParams d = p31();
  const Mat4 w = gate_W(d);
  CHECK(fidelity_trace(w, w) == Catch::Approx(1.0).margin(1e-12));
  CHECK(fidelity_trace((-w).eval(), w) == Catch::Approx(-1.0).margin(1e-12));
  CHECK_THROWS_AS(fidelity_trace((2.0 * w).eval(), w), std::invalid_argument);
  CHECK_THROWS_AS(fidelity_trace(w, (0.5 * w).eval()), std::invalid_argument);

  const double bstar = d.hyperfine_A / (d.gamma_e + d.gamma_n);
  CHECK(fidelity_trace(split_propagator(d, bstar, kTStar), w) ==
        Catch::Approx(1.0).margin(1e-10));

  for (const double t : {0.0, 7e-9, 31e-9}) {
    const Mat4 u = split_propagator(d, bstar, t);
    CHECK(fidelity_trace(u, u) == Catch::Approx(1.0).margin(1e-12));
    CHECK(std::abs(fidelity_trace(u, w)) <= 1.0 + 1e-12);
  }
}

TEST_CASE("analytic fidelity special values") {
  const DonorParams d = p31();
  const double tstar = kPi / (std::sqrt(2.0) * d.hyperfine_A);
  CHECK(fidelity_analytic(d, tstar) == Catch::Approx(1.0).margin(1e-12));
  CHECK(fidelity_analytic(d, 0.0) == Catch::Approx(kFZero).margin(1e-15));
  CHECK_THROWS_AS(fidelity_analytic(d, -1e-9), std::invalid_argument);

  const double bstar = d.hyperfine_A / (d.gamma_e + d.gamma_n);
  CHECK(fidelity_analytic(d, tstar, bstar) == Catch::Approx(1.0).margin(1e-12));
  CHECK_THROWS_AS(fidelity_analytic(d, tstar, 1.01 * bstar), std::domain_error);
}

TEST_CASE("analytic and trace fidelities agree on a dense grid") {
  const DonorParams d = p31();
  const Mat4 w = gate_W(d);
  const double bstar = d.hyperfine_A / (d.gamma_e + d.gamma_n);
  double max_dev = 0;
  for (int i = 0; i < 1024; ++i) {
    const double t = 100e-9 * i / 1023.0;
    const double dev = std::abs(fidelity_analytic(d, t) -
                                fidelity_trace(split_propagator(d, bstar, t), w));
    max_dev = std::max(max_dev, dev);
  }
  CHECK(max_dev <= 1e-10);
}

TEST_CASE("fidelity curve sampling") {
  const DonorParams d = p31();
  const double tstar = kPi / (std::sqrt(2.0) * d.hyperfine_A);

  const FidelityCurve two = fidelity_curve(d, tstar, 2);
  REQUIRE(two.samples.size() == 2);
  CHECK(two.samples[0].first == 0.0);
  CHECK(two.samples[0].second == Catch::Approx(kFZero).margin(1e-14));
  CHECK(two.samples[1].first == Catch::Approx(tstar).margin(1e-22));
  CHECK(two.samples[1].second == Catch::Approx(1.0).margin(1e-12));

  const FidelityCurve curve = fidelity_curve(d, 40e-9, 1024);
  REQUIRE(curve.samples.size() == 1024);
  for (size_t i = 0; i < curve.samples.size(); ++i) {
    CHECK(curve.samples[i].second <= 1.0 + 1e-12);
    CHECK(curve.samples[i].second >= -1.0 - 1e-12);
    if (i > 0) CHECK(curve.samples[i].first > curve.samples[i - 1].first);
  }

  CHECK_THROWS_AS(fidelity_curve(d, 40e-9, 1), std::invalid_argument);
  CHECK_THROWS_AS(fidelity_curve(d, 0.0, 16), std::invalid_argument);
}

TEST_CASE("curve peak sits at the entangling duration") {
  const DonorParams d = p31();
  const double tstar = kPi / (std::sqrt(2.0) * d.hyperfine_A);
  const double t_max = 40e-9;
  const int n = 1024;

  const FidelityPeak peak = find_fidelity_peak(d, t_max, n);
  const double step = t_max / (n - 1);
  CHECK(std::abs(peak.t - tstar) <= step);
  CHECK(peak.value == Catch::Approx(1.0).margin(1e-9));
  CHECK(peak.t * 1e9 == Catch::Approx(18.901059).margin(1e-3));

  const FidelityCurve curve = fidelity_curve(d, t_max, n);
  double grid_best = -2;
  for (const auto& [t, F] : curve.samples) grid_best = std::max(grid_best, F);
  CHECK(peak.value >= grid_best - 1e-15);
}
