#include <catch2/catch_amalgamated.hpp>

#include <numbers>
#include <random>

#include "spinprep/qmath.hpp"

using namespace spinprep;

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};

Mat2 random_mat2(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Mat2 m;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) m(r, c) = Complex(n(rng), n(rng));
  return m;
}

Mat4 random_hermitian4(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Mat4 m;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) m(r, c) = Complex(n(rng), n(rng));
  return ((m + m.adjoint()) / 2.0).eval();
}

}  // namespace

TEST_CASE("pauli matrices have the standard entries") {
  const Mat2 sx = pauli(Axis::x);
  const Mat2 sy = pauli(Axis::y);
  const Mat2 sz = pauli(Axis::z);
  CHECK(sx(0, 1) == Complex(1, 0));
  CHECK(sx(1, 0) == Complex(1, 0));
  CHECK(sx(0, 0) == Complex(0, 0));
  CHECK(sy(0, 1) == Complex(0, -1));
  CHECK(sy(1, 0) == Complex(0, 1));
  CHECK(sz(0, 0) == Complex(1, 0));
  CHECK(sz(1, 1) == Complex(-1, 0));

  CHECK(max_abs_diff((sx * sx).eval(), Mat2::Identity().eval()) == 0.0);
  CHECK(max_abs_diff((sx * sy).eval(), (kI * sz).eval()) == 0.0);
  CHECK(max_abs_diff((sy * sz).eval(), (kI * sx).eval()) == 0.0);
  CHECK(max_abs_diff((sz * sx).eval(), (kI * sy).eval()) == 0.0);
}

TEST_CASE("pauli_along reproduces the axis combination") {
  CHECK(max_abs_diff(pauli_along(0.0, 0.0), pauli(Axis::z)) < 1e-15);
  CHECK(max_abs_diff(pauli_along(kPi / 2, 0.0), pauli(Axis::x)) < 1e-15);
  CHECK(max_abs_diff(pauli_along(kPi / 2, kPi / 2), pauli(Axis::y)) < 1e-15);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    const double theta = u(rng) * kPi;
    const double phi = u(rng) * 2 * kPi;
    const Mat2 expect = std::sin(theta) * std::cos(phi) * pauli(Axis::x) +
                        std::sin(theta) * std::sin(phi) * pauli(Axis::y) +
                        std::cos(theta) * pauli(Axis::z);
    CHECK(max_abs_diff(pauli_along(theta, phi), expect.eval()) < 1e-15);
    CHECK(is_hermitian(pauli_along(theta, phi)));
    CHECK(is_unitary(pauli_along(theta, phi)));
  }
}

TEST_CASE("kron follows the first-spin-major basis order") {
  const Mat4 zi = kron(pauli(Axis::z), Mat2::Identity().eval());
  const Mat4 iz = kron(Mat2::Identity().eval(), pauli(Axis::z));
  const Eigen::Vector4d zi_diag(1, 1, -1, -1);
  const Eigen::Vector4d iz_diag(1, -1, 1, -1);
  for (int i = 0; i < 4; ++i) {
    CHECK(zi(i, i).real() == Catch::Approx(zi_diag(i)));
    CHECK(iz(i, i).real() == Catch::Approx(iz_diag(i)));
  }
  CHECK(max_abs_diff(zi, (zi.diagonal().asDiagonal().toDenseMatrix())) == 0.0);
}

TEST_CASE("kron is bilinear and multiplicative") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 100; ++k) {
    const Mat2 a = random_mat2(rng), b = random_mat2(rng), c = random_mat2(rng),
               d = random_mat2(rng);
    const Complex s(0.3, -1.2);
    CHECK(max_abs_diff(kron((a + s * b).eval(), c), (kron(a, c) + s * kron(b, c)).eval()) < 1e-12);
    CHECK(max_abs_diff((kron(a, b) * kron(c, d)).eval(), kron((a * c).eval(), (b * d).eval())) <
          1e-12);
  }
}

TEST_CASE("product_state matches the index convention") {
  Vec2 u, v;
  u << Complex(0.6, 0.0), Complex(0.0, 0.8);
  v << Complex(0.0, 1.0), Complex(1.0, 0.0);
  const TwoQubitState p = product_state(u, v);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(std::abs(p(2 * i + j) - u(i) * v(j)) < 1e-15);
  CHECK(std::abs(basis_ket(Ket::du)(2) - 1.0) == 0.0);
  CHECK(max_abs_diff(product_state(spin_down(), spin_up()), basis_ket(Ket::du)) == 0.0);
}

TEST_CASE("hermiticity and unitarity predicates") {
  CHECK(is_hermitian(pauli(Axis::y)));
  CHECK(is_unitary(pauli(Axis::y)));
  Mat2 m = pauli(Axis::x);
  m(0, 1) += Complex(0, 1e-6);
  CHECK_FALSE(is_hermitian(m));
  CHECK_FALSE(is_unitary((2.0 * Mat2::Identity()).eval()));
  Mat2 nf = Mat2::Identity();
  nf(0, 0) = Complex(std::nan(""), 0);
  CHECK_FALSE(is_finite(nf));
}

TEST_CASE("expm_taylor on closed-form cases") {
  CHECK(max_abs_diff(expm_taylor(Mat2::Zero().eval()), Mat2::Identity().eval()) == 0.0);

  Mat2 nilpotent = Mat2::Zero();
  nilpotent(0, 1) = Complex(3.5, -1.0);
  const Mat2 expect = Mat2::Identity() + nilpotent;
  CHECK(max_abs_diff(expm_taylor(nilpotent), expect.eval()) < 1e-14);

  const double theta = 0.7321;
  const Mat2 rot = expm_taylor((-kI * theta * pauli(Axis::x)).eval());
  const Mat2 closed = std::cos(theta) * Mat2::Identity() - kI * std::sin(theta) * pauli(Axis::x);
  CHECK(max_abs_diff(rot, closed.eval()) < 1e-14);

  Mat4 diag = Mat4::Zero();
  diag(0, 0) = Complex(0.1, 0.2);
  diag(3, 3) = Complex(-2.0, 1.0);
  const Mat4 e = expm_taylor(diag);
  CHECK(std::abs(e(0, 0) - std::exp(Complex(0.1, 0.2))) < 1e-14);
  CHECK(std::abs(e(1, 1) - Complex(1, 0)) < 1e-14);
  CHECK(std::abs(e(3, 3) - std::exp(Complex(-2.0, 1.0))) < 1e-13);
}

TEST_CASE("expm_oracle matches the spin rotation closed form") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    const double theta = u(rng) * kPi, phi = u(rng) * 2 * kPi, t = u(rng) * 5.0;
    const Mat2 sn = pauli_along(theta, phi);
    const Mat2 closed = std::cos(t) * Mat2::Identity() - kI * std::sin(t) * sn;
    CHECK(max_abs_diff(expm_oracle(sn, t), closed.eval()) < 1e-13);
  }
}

TEST_CASE("expm_oracle agrees with the series route and the group law") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const Mat4 h = random_hermitian4(rng);
    const double t1 = u(rng), t2 = u(rng);
    const Mat4 a = expm_oracle(h, t1);
    const Mat4 b = expm_taylor((-kI * t1 * h).eval());
    CHECK(max_abs_diff(a, b) < 1e-12);
    CHECK(max_abs_diff((a * expm_oracle(h, t2)).eval(), expm_oracle(h, t1 + t2)) < 1e-12);
  }
}

TEST_CASE("expm_oracle output is unitary for 1000 random hermitian inputs") {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int k = 0; k < 1000; ++k) {
    const Mat4 h = random_hermitian4(rng);
    CHECK(is_unitary(expm_oracle(h, u(rng)), 1e-10));
  }
}

TEST_CASE("expm_oracle rejects bad input") {
  Mat4 nh = Mat4::Zero();
  nh(0, 1) = Complex(1, 0);
  CHECK_THROWS_AS(expm_oracle(nh, 1.0), std::invalid_argument);

  Mat4 nf = Mat4::Identity();
  nf(2, 2) = Complex(std::numeric_limits<double>::infinity(), 0);
  CHECK_THROWS_AS(expm_oracle(nf, 1.0), std::invalid_argument);

  Mat4 almost = Mat4::Identity();
  almost(0, 1) = Complex(0, 5e-13);
  almost(1, 0) = Complex(0, -5e-13);
  CHECK_NOTHROW(expm_oracle(almost, 1.0));
}

TEST_CASE("orthogonal_state builds the orthonormal partner") {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> n;
  for (int k = 0; k < 50; ++k) {
    Vec2 v(Complex(n(rng), n(rng)), Complex(n(rng), n(rng)));
    v.normalize();
    const Vec2 w = orthogonal_state(v);
    CHECK(std::abs(v.dot(w)) < 1e-15);
    CHECK(std::abs(w.norm() - 1.0) < 1e-15);
    CHECK((orthogonal_state(w) + v).norm() < 1e-15);
  }
}

TEST_CASE("overlap_phase recovers a relative phase") {
  Vec2 a(Complex(0.6, 0.0), Complex(0.8, 0.0));
  const double delta = 1.234;
  const Vec2 b = (std::polar(1.0, delta) * a).eval();
  CHECK(overlap_phase(a, b) == Catch::Approx(delta).margin(1e-14));
  CHECK(overlap_phase(a, a) == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("svd2 reconstructs 1000 random matrices with the fixed gauge") {
  std::mt19937_64 rng(43);
  for (int k = 0; k < 1000; ++k) {
    const Mat2 m = random_mat2(rng);
    const Svd2 f = svd2(m);
    CHECK(f.singular_values(0) >= f.singular_values(1));
    CHECK(f.singular_values(1) >= 0.0);
    const Mat2 back =
        (f.u * f.singular_values.cast<Complex>().asDiagonal() * f.v.adjoint()).eval();
    CHECK(max_abs_diff(back, m) < 1e-12);
    CHECK(is_unitary(f.u, 1e-12));
    CHECK(is_unitary(f.v, 1e-12));
    for (int c = 0; c < 2; ++c) {
      int lead = std::abs(f.u(0, c)) > 1e-12 ? 0 : 1;
      CHECK(std::abs(std::arg(f.u(lead, c))) < 1e-10);
    }
  }
}

TEST_CASE("svd2 of the balanced antidiagonal matrix gives equal singular values") {
  Mat2 m = Mat2::Zero();
  m(0, 1) = Complex(1 / std::sqrt(2.0), 0);
  m(1, 0) = Complex(1 / std::sqrt(2.0), 0);
  const Svd2 f = svd2(m);
  CHECK(f.singular_values(0) == Catch::Approx(1 / std::sqrt(2.0)).margin(1e-14));
  CHECK(f.singular_values(1) == Catch::Approx(1 / std::sqrt(2.0)).margin(1e-14));
}

TEST_CASE("max_abs_diff reports the largest entry deviation") {
  Mat2 a = Mat2::Zero(), b = Mat2::Zero();
  b(1, 0) = Complex(0, -0.25);
  CHECK(max_abs_diff(a, b) == 0.25);
}
