#include "elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace solvgeo::elliptic {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Below this modulus the Jacobi functions are trigonometric to better than
// machine precision over any argument range we care about (|u| <= ~1e2).
constexpr double kTinyK = 1e-8;

// Near k = 1 the AGM still converges, but for arguments well inside the
// fundamental period the hyperbolic limit is both cheaper and more accurate.
constexpr double kTinyKprime = 1e-10;

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw std::domain_error(std::string(what) + " must be finite");
  }
}

}  // namespace

EllipticModulus EllipticModulus::from_k(double k) {
  require_finite(k, "elliptic modulus k");
  if (k < 0.0 || k >= 1.0) {
    throw std::domain_error("elliptic modulus k must satisfy 0 <= k < 1, got " +
                            std::to_string(k));
  }
  return EllipticModulus(k, std::sqrt((1.0 - k) * (1.0 + k)));
}

EllipticModulus EllipticModulus::from_kprime(double kprime) {
  require_finite(kprime, "complementary modulus k'");
  if (kprime <= 0.0 || kprime > 1.0) {
    throw std::domain_error(
        "complementary modulus k' must satisfy 0 < k' <= 1, got " +
        std::to_string(kprime));
  }
  return EllipticModulus(std::sqrt((1.0 - kprime) * (1.0 + kprime)), kprime);
}

// Carlson's duplication-theorem iterations. Error tolerances follow
// Carlson (1995): the truncation error of the Taylor tail is below machine
// precision once the arguments agree to tol^(1/8).
double carlson_rf(double x, double y, double z) {
  require_finite(x, "carlson_rf x");
  require_finite(y, "carlson_rf y");
  require_finite(z, "carlson_rf z");
  if (x < 0.0 || y < 0.0 || z < 0.0 || x + y == 0.0 || y + z == 0.0 ||
      z + x == 0.0) {
    throw std::domain_error(
        "carlson_rf requires nonnegative arguments, at most one zero");
  }
  static const double tol = std::pow(3.0 * kEps * 0.01, 1.0 / 8.0);
  double a0 = (x + y + z) / 3.0;
  double an = a0;
  double q = std::max({std::fabs(a0 - x), std::fabs(a0 - y), std::fabs(a0 - z)}) / tol;
  double xn = x, yn = y, zn = z;
  double mul = 1.0;
  while (q >= mul * std::fabs(an)) {
    double lam = std::sqrt(xn) * std::sqrt(yn) + std::sqrt(yn) * std::sqrt(zn) +
                 std::sqrt(zn) * std::sqrt(xn);
    xn = (xn + lam) / 4.0;
    yn = (yn + lam) / 4.0;
    zn = (zn + lam) / 4.0;
    an = (an + lam) / 4.0;
    mul *= 4.0;
  }
  double dx = (a0 - x) / (mul * an);
  double dy = (a0 - y) / (mul * an);
  double dz = -(dx + dy);
  double e2 = dx * dy - dz * dz;
  double e3 = dx * dy * dz;
  // Carlson, eq. 2.7.
  return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) /
         std::sqrt(an);
}

double carlson_rd(double x, double y, double z) {
  require_finite(x, "carlson_rd x");
  require_finite(y, "carlson_rd y");
  require_finite(z, "carlson_rd z");
  if (x < 0.0 || y < 0.0 || z <= 0.0 || x + y == 0.0) {
    throw std::domain_error(
        "carlson_rd requires x, y >= 0 (not both zero) and z > 0");
  }
  static const double tol = std::pow(0.2 * kEps * 0.01, 1.0 / 8.0);
  double a0 = (x + y + 3.0 * z) / 5.0;
  double an = a0;
  double q = std::max({std::fabs(a0 - x), std::fabs(a0 - y), std::fabs(a0 - z)}) / tol;
  double xn = x, yn = y, zn = z;
  double sum = 0.0;
  double mul = 1.0;
  while (q >= mul * std::fabs(an)) {
    double sz = std::sqrt(zn);
    double lam = std::sqrt(xn) * std::sqrt(yn) + std::sqrt(yn) * sz + sz * std::sqrt(xn);
    sum += 1.0 / (mul * sz * (zn + lam));
    xn = (xn + lam) / 4.0;
    yn = (yn + lam) / 4.0;
    zn = (zn + lam) / 4.0;
    an = (an + lam) / 4.0;
    mul *= 4.0;
  }
  double dx = (a0 - x) / (mul * an);
  double dy = (a0 - y) / (mul * an);
  double dz = -(dx + dy) / 3.0;
  double e2 = dx * dy - 6.0 * dz * dz;
  double e3 = (3.0 * dx * dy - 8.0 * dz * dz) * dz;
  double e4 = 3.0 * (dx * dy - dz * dz) * dz * dz;
  double e5 = dx * dy * dz * dz * dz;
  // Carlson, eq. 2.29.
  return (1.0 - 3.0 * e2 / 14.0 + e3 / 6.0 + 9.0 * e2 * e2 / 88.0 - 3.0 * e4 / 22.0 -
          9.0 * e2 * e3 / 52.0 + 3.0 * e5 / 26.0) /
             (mul * an * std::sqrt(an)) +
         3.0 * sum;
}

double complete_k(const EllipticModulus& m) {
  return carlson_rf(0.0, m.kprime2(), 1.0);
}

double complete_e(const EllipticModulus& m) {
  return carlson_rf(0.0, m.kprime2(), 1.0) -
         m.k2() / 3.0 * carlson_rd(0.0, m.kprime2(), 1.0);
}

namespace {

// Bulirsch's sncndn (Numerische Mathematik 7, 1965) via the descending
// Landen/AGM ladder, for complementary parameter mc = k'^2 in (0, 1].
// The argument must already be reduced to the fundamental period.
void bulirsch_sncndn(double x, double mc, double& sn, double& cn, double& dn) {
  static const double tol = std::sqrt(kEps * 0.01);
  constexpr int kMaxIter = 24;  // headroom for the sqrt chain at tiny mc
  double mn[kMaxIter][2];
  double c = 0.0;
  int l = 0;
  double a = 1.0;
  for (; l < kMaxIter; ++l) {
    mn[l][0] = a;
    mc = std::sqrt(mc);
    mn[l][1] = mc;
    c = 0.5 * (a + mc);
    if (std::fabs(a - mc) <= tol * a) {
      ++l;
      break;
    }
    mc *= a;
    a = c;
  }
  x *= c;
  sn = std::sin(x);
  cn = std::cos(x);
  dn = 1.0;
  if (sn != 0.0) {
    a = cn / sn;
    c *= a;
    for (int i = l - 1; i >= 0; --i) {
      double b = mn[i][0];
      a *= c;
      c *= dn;
      dn = (mn[i][1] + a) / (b + a);
      a = c / b;
    }
    a = 1.0 / std::sqrt(c * c + 1.0);
    sn = (sn < 0.0) ? -a : a;
    cn = c * sn;
  }
}

}  // namespace

JacobiTriple jacobi(double u, const EllipticModulus& m) {
  require_finite(u, "jacobi argument u");
  JacobiTriple t;
  if (m.k() < kTinyK) {
    // Trigonometric degeneration; the O(k^2) amplitude correction is below
    // machine precision for |u| <= ~1e2.
    t.sn = std::sin(u);
    t.cn = std::cos(u);
    t.dn = std::sqrt(1.0 - m.k2() * t.sn * t.sn);
    t.am = u;
    return t;
  }
  double big_k = complete_k(m);
  if (m.kprime() < kTinyKprime && std::fabs(u) < 0.5 * big_k) {
    // Hyperbolic limit, valid well away from the quarter period where the
    // k = 1 degeneration and the periodic function part ways.
    t.sn = std::tanh(u);
    t.cn = 1.0 / std::cosh(u);
    t.dn = t.cn;
    t.am = std::atan(std::sinh(u));  // Gudermannian
    return t;
  }
  // Reduce to the fundamental period |ur| <= K; sn and cn flip sign under a
  // half-period shift, dn is 2K-periodic, and am gains n*pi.
  double n = std::round(u / (2.0 * big_k));
  double ur = u - 2.0 * big_k * n;
  double sn, cn, dn;
  bulirsch_sncndn(ur, m.kprime2(), sn, cn, dn);
  double flip = (std::fmod(std::fabs(n), 2.0) == 1.0) ? -1.0 : 1.0;
  t.am = n * kPi + std::atan2(sn, cn);
  t.sn = flip * sn;
  t.cn = flip * cn;
  t.dn = dn;
  return t;
}

double incomplete_f(double phi, const EllipticModulus& m) {
  require_finite(phi, "amplitude phi");
  double n = std::round(phi / kPi);
  double phir = phi - n * kPi;  // |phir| <= pi/2
  double s = std::sin(phir);
  double c = std::cos(phir);
  // 1 - k^2 sin^2 written as k'^2 + k^2 cos^2 to stay positive near the
  // quarter period.
  double d2 = m.kprime2() + m.k2() * c * c;
  double f = s * carlson_rf(c * c, d2, 1.0);
  if (n != 0.0) f += 2.0 * n * complete_k(m);
  return f;
}

double incomplete_e(double phi, const EllipticModulus& m) {
  require_finite(phi, "amplitude phi");
  double n = std::round(phi / kPi);
  double phir = phi - n * kPi;
  double s = std::sin(phir);
  double c = std::cos(phir);
  double d2 = m.kprime2() + m.k2() * c * c;
  double e = s * carlson_rf(c * c, d2, 1.0) -
             m.k2() / 3.0 * s * s * s * carlson_rd(c * c, d2, 1.0);
  if (n != 0.0) e += 2.0 * n * complete_e(m);
  return e;
}

double inverse_dn(double w, const EllipticModulus& m) {
  require_finite(w, "dn value w");
  if (w > 1.0 || w < m.kprime()) {
    throw std::domain_error("inverse_dn requires k' <= w <= 1, got w = " +
                            std::to_string(w) + " with k' = " +
                            std::to_string(m.kprime()));
  }
  if (w >= 1.0) return 0.0;
  if (w <= m.kprime()) return complete_k(m);
  // dn(v) = w on [0, K] means sn^2 = (1 - w^2)/k^2 and cn^2 = (w^2 - k'^2)/k^2.
  // Feed Carlson's R_F directly instead of round-tripping through asin:
  // near w ~ k' the amplitude sits within one ulp of pi/2 and asin would
  // collapse v onto K, while cn^2 stays perfectly resolvable via the
  // difference products below.  The third R_F argument is dn^2 = w^2 exactly.
  const double sn2 = std::max(0.0, (1.0 - w) * (1.0 + w) / m.k2());
  const double cn2 = std::max(0.0, (w - m.kprime()) * (w + m.kprime()) / m.k2());
  return std::sqrt(sn2) * carlson_rf(cn2, w * w, 1.0);
}

}  // namespace solvgeo::elliptic
