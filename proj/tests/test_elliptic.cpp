#include "elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <doctest.h>

#include "support/oracles.hpp"

using namespace solvgeo::elliptic;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Modulus arising from the geodesic data a = b = 0.3: k = 4*sqrt(5)/9,
// k' = 1/9. Exercises the near-unity regime where naive formulas lose digits.
const double kSharp = 4.0 * std::sqrt(5.0) / 9.0;

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

}  // namespace

TEST_CASE("modulus constructors validate their domain") {
  CHECK(EllipticModulus::from_k(0.0).kprime() == 1.0);
  CHECK(EllipticModulus::from_kprime(1.0).k() == 0.0);
  CHECK(EllipticModulus::from_k(0.6).kprime() == doctest::Approx(0.8).epsilon(1e-15));
  CHECK_THROWS_AS(EllipticModulus::from_k(1.0), std::domain_error);
  CHECK_THROWS_AS(EllipticModulus::from_k(-0.1), std::domain_error);
  CHECK_THROWS_AS(EllipticModulus::from_k(std::nan("")), std::domain_error);
  CHECK_THROWS_AS(EllipticModulus::from_kprime(0.0), std::domain_error);
  CHECK_THROWS_AS(EllipticModulus::from_kprime(1.5), std::domain_error);
}

TEST_CASE("jacobi functions at u = 0 and at k = 0") {
  const auto m = EllipticModulus::from_k(0.7);
  const auto j0 = jacobi(0.0, m);
  CHECK(j0.sn == 0.0);
  CHECK(j0.cn == 1.0);
  CHECK(j0.dn == 1.0);
  CHECK(j0.am == 0.0);

  // Trigonometric degeneration: sn = sin, cn = cos, dn = 1.
  const auto trig = EllipticModulus::from_k(0.0);
  for (double u : {-7.3, -1.0, 0.25, 2.0, 9.5}) {
    const auto j = jacobi(u, trig);
    CHECK(std::abs(j.sn - std::sin(u)) <= 1e-15);
    CHECK(std::abs(j.cn - std::cos(u)) <= 1e-15);
    CHECK(std::abs(j.dn - 1.0) <= 1e-15);
    CHECK(std::abs(j.am - u) <= 1e-15);
  }
}

TEST_CASE("jacobi values against frozen high-precision references") {
  // jacobi(1, 4*sqrt(5)/9); reference values computed independently
  // (amplitude-ODE oracle, cross-checked with multiprecision software).
  const auto m = EllipticModulus::from_k(kSharp);
  const auto j = jacobi(1.0, m);
  CHECK(std::abs(j.sn - 0.76264780205690377) <= 1e-14);
  CHECK(std::abs(j.cn - 0.64681398409262437) <= 1e-14);
  CHECK(std::abs(j.dn - 0.65234114381877591) <= 1e-14);
  CHECK(std::abs(j.am - 0.86739690110596251) <= 1e-14);
}

TEST_CASE("complete and incomplete integrals against frozen references") {
  CHECK(std::abs(complete_k(EllipticModulus::from_k(0.8)) -
                 1.9953027776647294) <= 1e-14);
  CHECK(std::abs(complete_e(EllipticModulus::from_k(0.8)) -
                 1.2763499431699064) <= 1e-14);
  CHECK(std::abs(complete_k(EllipticModulus::from_k(kSharp)) -
                 3.5915449997965129) <= 2e-14);
  const auto half = EllipticModulus::from_k(0.5);
  CHECK(std::abs(incomplete_f(kPi / 3.0, half) - 1.0895506700518854) <= 1e-14);
  CHECK(std::abs(incomplete_e(kPi / 3.0, half) - 1.0075555551444720) <= 1e-14);
  // k = 0 degeneration: both integrals reduce to phi itself.
  const auto trig = EllipticModulus::from_kprime(1.0);
  CHECK(std::abs(incomplete_f(0.7, trig) - 0.7) <= 5e-15);
  CHECK(std::abs(incomplete_e(-2.9, trig) + 2.9) <= 5e-15);
  CHECK(std::abs(complete_k(trig) - kPi / 2.0) <= 5e-15);
  CHECK(incomplete_f(0.0, half) == 0.0);
  CHECK(incomplete_e(0.0, half) == 0.0);
}

TEST_CASE("pythagorean identities over a dense random sweep") {
  std::mt19937_64 rng(20240811);
  double worst_sc = 0.0, worst_d = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double u = uniform(rng, -10.0, 10.0);
    const double k = uniform(rng, 0.0, 0.999);
    const auto m = EllipticModulus::from_k(k);
    const auto j = jacobi(u, m);
    worst_sc = std::max(worst_sc, std::abs(j.sn * j.sn + j.cn * j.cn - 1.0));
    worst_d = std::max(worst_d,
                       std::abs(j.dn * j.dn + m.k2() * j.sn * j.sn - 1.0));
    CHECK(j.dn >= m.kprime() - 1e-15);
    CHECK(j.dn <= 1.0 + 1e-15);
  }
  CHECK(worst_sc <= 1e-12);
  CHECK(worst_d <= 1e-12);
}

TEST_CASE("identities hold out to |u| = 50 and k' down to 1e-10") {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 2000; ++i) {
    const double u = uniform(rng, -50.0, 50.0);
    // Log-uniform complementary modulus reaching the hyperbolic edge.
    const double kp = std::pow(10.0, uniform(rng, -10.0, 0.0));
    const auto m = EllipticModulus::from_kprime(kp);
    const auto j = jacobi(u, m);
    CHECK(std::abs(j.sn * j.sn + j.cn * j.cn - 1.0) <= 1e-12);
    CHECK(std::abs(j.dn * j.dn + m.k2() * j.sn * j.sn - 1.0) <= 1e-12);
    CHECK(j.dn >= m.kprime() - 1e-15);
    CHECK(j.dn <= 1.0 + 1e-15);
  }
}

TEST_CASE("jacobi functions match the amplitude-ODE oracle") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 60; ++i) {
    const double u = uniform(rng, -8.0, 8.0);
    const double k = uniform(rng, 0.05, 0.995);
    const auto j = jacobi(u, EllipticModulus::from_k(k));
    const auto ref = oracles::jacobi_via_ode(u, k);
    CHECK(std::abs(j.sn - ref.sn) <= 1e-11);
    CHECK(std::abs(j.cn - ref.cn) <= 1e-11);
    CHECK(std::abs(j.dn - ref.dn) <= 1e-11);
    CHECK(std::abs(j.am - ref.am) <= 1e-11);
  }
}

TEST_CASE("derivatives by central differences") {
  // d(sn)/du = cn dn, d(cn)/du = -sn dn, d(dn)/du = -k^2 sn cn.
  std::mt19937_64 rng(99);
  const double h = 1e-6;
  for (int i = 0; i < 200; ++i) {
    const double u = uniform(rng, -5.0, 5.0);
    const double k = uniform(rng, 0.05, 0.98);
    const auto m = EllipticModulus::from_k(k);
    const auto j = jacobi(u, m);
    const auto jp = jacobi(u + h, m);
    const auto jm = jacobi(u - h, m);
    const double dsn = (jp.sn - jm.sn) / (2.0 * h);
    const double dcn = (jp.cn - jm.cn) / (2.0 * h);
    const double ddn = (jp.dn - jm.dn) / (2.0 * h);
    CHECK(std::abs(dsn - j.cn * j.dn) <= 1e-6 * std::max(1.0, std::abs(dsn)));
    CHECK(std::abs(dcn + j.sn * j.dn) <= 1e-6 * std::max(1.0, std::abs(dcn)));
    CHECK(std::abs(ddn + m.k2() * j.sn * j.cn) <=
          1e-6 * std::max(1.0, std::abs(ddn)));
  }
}

TEST_CASE("periodicity and the continuous amplitude branch") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 200; ++i) {
    const double u = uniform(rng, -6.0, 6.0);
    const double k = uniform(rng, 0.1, 0.99);
    const auto m = EllipticModulus::from_k(k);
    const double K = complete_k(m);
    const auto j = jacobi(u, m);
    const auto j2 = jacobi(u + 2.0 * K, m);
    const auto j4 = jacobi(u + 4.0 * K, m);
    CHECK(std::abs(j4.sn - j.sn) <= 1e-10);
    CHECK(std::abs(j4.cn - j.cn) <= 1e-10);
    CHECK(std::abs(j2.dn - j.dn) <= 1e-10);
    // Half-period flips of sn/cn and the pi-shift of the amplitude.
    CHECK(std::abs(j2.sn + j.sn) <= 1e-10);
    CHECK(std::abs(j2.cn + j.cn) <= 1e-10);
    CHECK(std::abs(j2.am - j.am - kPi) <= 1e-10);
    // Odd symmetry of sn/am, even symmetry of cn/dn.
    const auto jn = jacobi(-u, m);
    CHECK(std::abs(jn.sn + j.sn) <= 1e-13);
    CHECK(std::abs(jn.cn - j.cn) <= 1e-13);
    CHECK(std::abs(jn.dn - j.dn) <= 1e-13);
    CHECK(std::abs(jn.am + j.am) <= 1e-13);
  }
}

TEST_CASE("amplitude round trip through the incomplete integral") {
  std::mt19937_64 rng(4711);
  for (int i = 0; i < 300; ++i) {
    const double k = uniform(rng, 0.05, 0.995);
    const auto m = EllipticModulus::from_k(k);
    const double K = complete_k(m);
    // Principal interval [0, K] ...
    const double u = uniform(rng, 0.0, 1.0) * K;
    CHECK(std::abs(incomplete_f(jacobi(u, m).am, m) - u) <= 1e-10);
    // ... and the continued branch several periods out.
    const double v = uniform(rng, -10.0, 10.0);
    CHECK(std::abs(incomplete_f(jacobi(v, m).am, m) - v) <=
          1e-10 * std::max(1.0, std::abs(v)));
  }
}

TEST_CASE("incomplete integrals match Romberg quadrature") {
  std::mt19937_64 rng(2025);
  double worst_f = 0.0, worst_e = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double phi = uniform(rng, -kPi / 2.0, kPi / 2.0);
    const double k = uniform(rng, 0.0, 0.995);
    const auto m = EllipticModulus::from_k(k);
    worst_f = std::max(worst_f, std::abs(incomplete_f(phi, m) -
                                         oracles::incomplete_f_quadrature(phi, k)));
    worst_e = std::max(worst_e, std::abs(incomplete_e(phi, m) -
                                         oracles::incomplete_e_quadrature(phi, k)));
  }
  CHECK(worst_f <= 1e-10);
  CHECK(worst_e <= 1e-10);
}

TEST_CASE("incomplete integrals are continuous across the pi reduction") {
  // The Carlson reduction switches branch counts at odd multiples of pi/2;
  // step over several boundaries and bound the jump by the local slope.
  const auto m = EllipticModulus::from_k(0.9);
  for (int n = -2; n <= 2; ++n) {
    const double phi = (2.0 * n + 1.0) * kPi / 2.0;
    const double eps = 1e-9;
    const double jump_f =
        std::abs(incomplete_f(phi + eps, m) - incomplete_f(phi - eps, m));
    const double jump_e =
        std::abs(incomplete_e(phi + eps, m) - incomplete_e(phi - eps, m));
    CHECK(jump_f <= 1e-7);
    CHECK(jump_e <= 1e-7);
  }
}

TEST_CASE("inverse_dn against frozen reference and bisection oracle") {
  const auto m = EllipticModulus::from_k(kSharp);
  const double v = inverse_dn(1.0 / 3.0, m);
  CHECK(std::abs(v - 1.7957724998982564) <= 1e-13);
  const double K = complete_k(m);
  CHECK(std::abs(v - oracles::inverse_dn_bisection(1.0 / 3.0, kSharp, K)) <=
        1e-12);

  CHECK(inverse_dn(1.0, m) == 0.0);
  CHECK(std::abs(inverse_dn(m.kprime(), m) - K) <= 1e-12);
  CHECK_THROWS_AS(inverse_dn(1.0 + 1e-9, m), std::domain_error);
  CHECK_THROWS_AS(inverse_dn(m.kprime() - 1e-6, m), std::domain_error);
}

TEST_CASE("inverse_dn round trip across moduli") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 300; ++i) {
    const double k = uniform(rng, 0.1, 0.999);
    const auto m = EllipticModulus::from_k(k);
    const double K = complete_k(m);
    const double w =
        m.kprime() + (1.0 - m.kprime()) * uniform(rng, 0.0, 1.0);
    const double v = inverse_dn(w, m);
    CHECK(v >= 0.0);
    CHECK(v <= K * (1.0 + 1e-12));
    CHECK(std::abs(jacobi(v, m).dn - w) <= 1e-10);
  }
}

TEST_CASE("inverse_dn stays exact in the near-degenerate corner") {
  // k' = 5e-9 with w = 2k': the amplitude is within one ulp of pi/2, which
  // defeats any asin-based inversion; the direct symmetric-integral form
  // must still satisfy dn(v) = w.
  const auto m = EllipticModulus::from_kprime(5e-9);
  const double w = 1e-8;
  const double v = inverse_dn(w, m);
  CHECK(std::abs(jacobi(v, m).dn - w) <= 1e-8 * 1e-6);
}

TEST_CASE("carlson integrals reproduce elementary special values") {
  // R_F(x, x, x) = x^{-1/2}; R_D(0, y, y) = 3 pi / (4 y^{3/2}).
  CHECK(std::abs(carlson_rf(4.0, 4.0, 4.0) - 0.5) <= 1e-15);
  CHECK(std::abs(carlson_rd(0.0, 1.0, 1.0) - 3.0 * kPi / 4.0) <= 1e-14);
  // lemniscatic value: R_F(0, 1, 2) = Gamma(1/4)^2 / (4 sqrt(2 pi)).
  CHECK(std::abs(carlson_rf(0.0, 1.0, 2.0) - 1.3110287771460600) <= 1e-14);
  CHECK_THROWS_AS(carlson_rf(-1.0, 1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(carlson_rd(1.0, 1.0, 0.0), std::domain_error);
}

TEST_CASE("non-finite arguments are rejected") {
  const auto m = EllipticModulus::from_k(0.5);
  CHECK_THROWS_AS(jacobi(std::nan(""), m), std::domain_error);
  CHECK_THROWS_AS(incomplete_f(std::numeric_limits<double>::infinity(), m),
                  std::domain_error);
  CHECK_THROWS_AS(inverse_dn(std::nan(""), m), std::domain_error);
}
