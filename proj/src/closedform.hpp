#pragma once

#include <optional>
#include <span>
#include <string>

#include "elliptic.hpp"
#include "model.hpp"
#include "trajectory.hpp"

namespace solvgeo::closedform {

/// Classification threshold separating the degenerate families from the
/// generic elliptic one.
inline constexpr double kCaseEps = 1e-9;

/// Below this complementary modulus the elliptic evaluation is replaced by
/// the hyperbolic degenerate formulas. k' ~ |ab| there, so the discarded
/// momentum component is ~1e-12 and the induced endpoint error stays under
/// 1e-12 * e^(2t) — negligible for the supported time spans. (A larger
/// threshold would be wrong: zeroing a momentum component of size m costs
/// O(m * e^(2|z|)) in the endpoint, which criterion-level tolerances do not
/// absorb, while the elliptic kernel itself stays accurate down to here.)
inline constexpr double kKprimeFallback = 1e-12;

enum class GeodesicCase {
  generic,   // a != 0, b != 0, ab < 1/4: bounded oscillation of z
  vertical,  // a = b = 0: straight line along z
  a_zero,    // a = 0, b != 0: z runs to -infinity
  b_zero,    // b = 0, a != 0: z runs to +infinity
  line,      // ab = 1/4 (so a = b = +-1/2, pz0 = 0): horizontal line, z = 0
};

const char* case_name(GeodesicCase c);

GeodesicCase classify(const NormalizedCovector& c, double eps = kCaseEps);

/// Frozen data of a generic geodesic: turning values sigma2 <= e^z <= sigma1,
/// elliptic modulus, signed frequency omega = sigma1*b of the elliptic phase
/// v(t) = omega*t + v0, and the integration constants of x(t), y(t).
struct GenericParams {
  double a, b, pz0;
  double sigma1, sigma2;
  elliptic::EllipticModulus modulus;
  double omega;    // d(phase)/dt
  double v0;       // phase at t = 0, fixed by dn(v0) = 1/sigma1 and sign of pz0
  double t0;       // time shift -v0/omega
  double coef_x, x_const;
  double coef_y, y_const;
};

GenericParams generic_params(const NormalizedCovector& c);

/// A geodesic from the identity with frozen evaluation data. Construction
/// classifies the covector, validates normalization and precomputes the
/// constants of the selected branch.
class Geodesic {
 public:
  explicit Geodesic(const NormalizedCovector& c);

  const NormalizedCovector& covector() const { return c_; }
  /// Classification of the covector (exact arithmetic idealization).
  GeodesicCase nominal_case() const { return nominal_; }
  /// Branch actually evaluated; differs from nominal_case only when the
  /// generic branch is too ill-conditioned (k' < kKprimeFallback).
  GeodesicCase dispatch_case() const { return dispatch_; }
  const std::optional<GenericParams>& generic() const { return params_; }

  PhaseState eval(double t) const;
  Trajectory sample(std::span<const double> times) const;

  /// One-line JSON record {a, b, pz0, case, sigma1, sigma2, k, t0};
  /// the last four are null in non-generic cases.
  std::string metadata_json() const;

 private:
  NormalizedCovector c_;
  GeodesicCase nominal_;
  GeodesicCase dispatch_;
  std::optional<GenericParams> params_;
};

/// One-shot helpers over Geodesic.
PhaseState eval(const NormalizedCovector& c, double t);
Trajectory eval_trajectory(const NormalizedCovector& c,
                           std::span<const double> times);

}  // namespace solvgeo::closedform
