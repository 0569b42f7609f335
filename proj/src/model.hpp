#pragma once

namespace solvgeo {

/// Point of the solvable group in global coordinates (x, y, z).
struct GroupPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// Point of the cotangent bundle: base point plus momentum covector.
struct PhaseState {
  GroupPoint point;
  double px = 0.0;
  double py = 0.0;
  double pz = 0.0;
};

/// Tangent vector at a group point, in coordinate components.
struct Velocity {
  double dx = 0.0;
  double dy = 0.0;
  double dz = 0.0;
};

/// Initial covector at the identity, normalized to the unit-speed level set
/// H = 1/2 and expressed through a = px/sqrt(2), b = py/sqrt(2). Admissible
/// data satisfy (a + b)^2 + pz0^2 = 1.
struct NormalizedCovector {
  double a = 0.0;
  double b = 0.0;
  double pz0 = 0.0;

  double px() const;
  double py() const;
};

/// Group product. The left translation by (x1, y1, z1) scales the fiber
/// coordinates anisotropically: x by e^{-z1}, y by e^{z1}.
GroupPoint group_multiply(const GroupPoint& g, const GroupPoint& h);

/// Normal Hamiltonian of the rank-2 distribution,
/// H = 1/4 e^{-2z} px^2 + 1/2 px py + 1/4 e^{2z} py^2 + 1/2 pz^2.
double hamiltonian(const PhaseState& s);

/// Length of a tangent vector in the metric e^{2z} dx^2 + e^{-2z} dy^2 + dz^2.
double sub_riemannian_speed(const GroupPoint& at, const Velocity& v);

/// Deviation of v from the horizontal distribution: dy - e^{2z} dx.
/// Vanishes identically for velocities generated by the Hamiltonian flow.
double admissibility_residual(const GroupPoint& at, const Velocity& v);

/// Rescale an arbitrary nonzero covector at the identity onto H = 1/2.
/// Covectors annihilating the distribution (px + py = 0, pz = 0) have H = 0
/// and cannot be normalized; they throw std::domain_error.
NormalizedCovector normalize_covector(double px, double py, double pz);

/// Build an admissible covector directly from (a, b) and the sign of pz0,
/// with |pz0| determined by the unit-speed constraint (a + b)^2 + pz0^2 = 1.
/// Throws std::domain_error if (a + b)^2 > 1.
NormalizedCovector covector_from_ab(double a, double b, int pz_sign);

/// Unit-speed constraint residual (a + b)^2 + pz0^2 - 1 at the identity.
double normalization_residual(const NormalizedCovector& c);

}  // namespace solvgeo
