#include "model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace solvgeo {

namespace {

constexpr double kSqrt2 = 1.414213562373095048801688724209698079;

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw std::domain_error(std::string(what) + " must be finite");
  }
}

}  // namespace

double NormalizedCovector::px() const { return kSqrt2 * a; }

double NormalizedCovector::py() const { return kSqrt2 * b; }

GroupPoint group_multiply(const GroupPoint& g, const GroupPoint& h) {
  return GroupPoint{g.x + std::exp(-g.z) * h.x, g.y + std::exp(g.z) * h.y,
                    g.z + h.z};
}

double hamiltonian(const PhaseState& s) {
  // Two exponentials rather than one exp and a division: exp(-z) negates the
  // argument exactly, so the swap reflection (x,y,z,px,py,pz) ->
  // (y,x,-z,py,px,pz) permutes the summands and preserves H bit-for-bit.
  double horizontal = s.px * std::exp(-s.point.z) + s.py * std::exp(s.point.z);
  return 0.25 * horizontal * horizontal + 0.5 * s.pz * s.pz;
}

double sub_riemannian_speed(const GroupPoint& at, const Velocity& v) {
  double ez = std::exp(at.z);
  return std::hypot(ez * v.dx, v.dy / ez, v.dz);
}

double admissibility_residual(const GroupPoint& at, const Velocity& v) {
  double ez = std::exp(at.z);
  return v.dy - ez * ez * v.dx;
}

NormalizedCovector normalize_covector(double px, double py, double pz) {
  require_finite(px, "px");
  require_finite(py, "py");
  require_finite(pz, "pz");
  double horizontal = px + py;
  double h0 = 0.25 * horizontal * horizontal + 0.5 * pz * pz;
  if (h0 <= 0.0) {
    throw std::domain_error(
        "covector annihilates the distribution (px + py = 0, pz = 0); "
        "it generates no geodesic and cannot be normalized");
  }
  double scale = 1.0 / std::sqrt(2.0 * h0);
  return NormalizedCovector{scale * px / kSqrt2, scale * py / kSqrt2,
                            scale * pz};
}

NormalizedCovector covector_from_ab(double a, double b, int pz_sign) {
  require_finite(a, "a");
  require_finite(b, "b");
  double s = a + b;
  if (s * s > 1.0) {
    throw std::domain_error(
        "inadmissible covector: unit speed at the identity requires "
        "|a + b| <= 1, got a + b = " +
        std::to_string(s));
  }
  double pz0 = std::sqrt(std::fmax(0.0, (1.0 - s) * (1.0 + s)));
  if (pz_sign < 0) pz0 = -pz0;
  return NormalizedCovector{a, b, pz0};
}

double normalization_residual(const NormalizedCovector& c) {
  double s = c.a + c.b;
  return s * s + c.pz0 * c.pz0 - 1.0;
}

}  // namespace solvgeo
