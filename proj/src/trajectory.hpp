#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "model.hpp"

namespace solvgeo {

/// Per-sample diagnostics relative to the conserved quantities of the
/// unit-speed geodesic flow: H = 1/2, constant px and py, admissible and
/// unit-length velocity.
struct ResidualSample {
  double h_err = 0.0;       // |H - 1/2|
  double px_drift = 0.0;    // |px - px(0)|
  double py_drift = 0.0;    // |py - py(0)|
  double speed_err = 0.0;   // |speed - 1| of the flow velocity
  double adm_err = 0.0;     // |dy - e^{2z} dx| of the flow velocity
};

/// Sampled phase curve t -> (x, y, z, px, py, pz) with residual records.
struct Trajectory {
  std::vector<double> times;
  std::vector<PhaseState> states;
  std::vector<ResidualSample> residuals;

  std::size_t size() const { return times.size(); }
};

/// Worst-case residuals over all samples of a trajectory.
struct DriftReport {
  double h = 0.0;
  double px = 0.0;
  double py = 0.0;
  double speed = 0.0;
  double admissibility = 0.0;
};

/// Residuals of a single state against the initial covector.
ResidualSample residual_sample(const PhaseState& s, const NormalizedCovector& c);

DriftReport invariant_drift(const Trajectory& traj);

/// CSV with header t,x,y,z,px,py,pz,H,speed_err,adm_err; one row per sample,
/// values at 17 significant digits (round-trip exact).
void write_trajectory_csv(const Trajectory& traj, std::ostream& out);

}  // namespace solvgeo
