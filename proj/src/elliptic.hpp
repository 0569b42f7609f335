#pragma once

namespace solvgeo::elliptic {

/// Real modulus pair (k, k') with k^2 + k'^2 = 1 and 0 <= k < 1.
/// k = 0 is the trigonometric degeneration; k = 1 is rejected.
class EllipticModulus {
 public:
  static EllipticModulus from_k(double k);
  static EllipticModulus from_kprime(double kprime);

  double k() const { return k_; }
  double kprime() const { return kprime_; }
  double k2() const { return k_ * k_; }
  double kprime2() const { return kprime_ * kprime_; }

 private:
  EllipticModulus(double k, double kprime) : k_(k), kprime_(kprime) {}
  double k_;
  double kprime_;
};

/// Jacobi functions at a common argument. am is the continuous (unbounded)
/// amplitude branch: am(0) = 0 and am(u + 2K) = am(u) + pi, so that
/// E(am(u), k) grows monotonically with u.
struct JacobiTriple {
  double sn;
  double cn;
  double dn;
  double am;
};

// Carlson symmetric integrals R_F and R_D (Carlson 1995, Numerical
// Algorithms 10, 13-26). Arguments nonnegative, at most one zero (R_D needs
// z > 0); violations throw std::domain_error.
double carlson_rf(double x, double y, double z);
double carlson_rd(double x, double y, double z);

/// Complete integrals K(k) = F(pi/2, k) and E(k) = E(pi/2, k).
double complete_k(const EllipticModulus& m);
double complete_e(const EllipticModulus& m);

/// sn, cn, dn, am at argument u. Throws std::domain_error for non-finite u.
JacobiTriple jacobi(double u, const EllipticModulus& m);

/// Legendre incomplete integral of the first kind, continuous in phi:
/// F(phi + n*pi, k) = F(phi, k) + 2nK.
double incomplete_f(double phi, const EllipticModulus& m);

/// Legendre incomplete integral of the second kind, continuous in phi.
double incomplete_e(double phi, const EllipticModulus& m);

/// Smallest v >= 0 with dn(v, k) = w. Requires k' <= w <= 1; the result
/// lies in [0, K(k)]. Out-of-range w throws std::domain_error.
double inverse_dn(double w, const EllipticModulus& m);

}  // namespace solvgeo::elliptic
