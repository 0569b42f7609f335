#pragma once

#include <iosfwd>
#include <vector>

#include "model.hpp"

namespace solvgeo::sphere {

/// Rectangular parameter grid for a geodesic sphere of the given radius.
/// theta parameterizes the unit-speed constraint (a + b = cos theta,
/// pz0 = sin theta); mu controls the split between a and b through
/// b - a = mu / (sqrt(2) sin theta). The defaults reproduce the reference
/// picture of the unit-sphere wavefront.
struct GridSpec {
  double radius = 0.25;
  double theta_min = 0.523598775598298873077107230546583814;  // pi/6
  double theta_max = 2.617993877991494365385536152732919070;  // 5 pi/6
  double mu_min = -45.0;
  double mu_max = 45.0;
  int n_theta = 32;
  int n_mu = 32;
};

enum class SampleMethod {
  closed_form,   // elliptic/degenerate formula, residual-checked
  ode_fallback,  // closed form rejected; numerically integrated endpoint
  failed,        // node could not be evaluated; coordinates are NaN
};

struct SpherePoint {
  double theta = 0.0;
  double mu = 0.0;
  GroupPoint endpoint;
  SampleMethod method = SampleMethod::failed;
};

/// Sampled sphere, nodes in theta-major order (theta index i outer,
/// mu index j inner).
struct SphereGrid {
  GridSpec spec;
  std::vector<SpherePoint> points;

  const SpherePoint& at(int i, int j) const {
    return points[static_cast<std::size_t>(i) *
                      static_cast<std::size_t>(spec.n_mu) +
                  static_cast<std::size_t>(j)];
  }
};

/// Covector of the grid chart. Throws std::domain_error when mu != 0 on the
/// equatorial degeneracy sin theta = 0, where the chart is singular.
NormalizedCovector covector_from_grid(double theta, double mu);

/// Evaluate all grid nodes at t = radius. Each node tries the closed form
/// and falls back to integration when the conserved-quantity residual
/// exceeds 1e-8; per-node failures are recorded, never fatal. Honors the
/// SOL_GEODESICS_THREADS environment variable (default: all cores).
SphereGrid sample_sphere(const GridSpec& spec);

/// CSV: header theta,mu,x,y,z; one row per node in grid order; 17
/// significant digits. exp_z replaces the z column by e^z.
void write_csv(const SphereGrid& grid, std::ostream& out, bool exp_z = false);

/// Wavefront OBJ: one vertex per node in grid order, quad faces between
/// neighboring nodes (faces touching failed nodes are dropped).
void write_obj(const SphereGrid& grid, std::ostream& out, bool exp_z = false);

}  // namespace solvgeo::sphere
