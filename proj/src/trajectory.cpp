#include "trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "flow.hpp"
#include "format.hpp"

namespace solvgeo {

ResidualSample residual_sample(const PhaseState& s, const NormalizedCovector& c) {
  ResidualSample r;
  r.h_err = std::fabs(hamiltonian(s) - 0.5);
  r.px_drift = std::fabs(s.px - c.px());
  r.py_drift = std::fabs(s.py - c.py());
  auto d = flow::hamiltonian_rhs(s);
  Velocity v{d[0], d[1], d[2]};
  r.speed_err = std::fabs(sub_riemannian_speed(s.point, v) - 1.0);
  r.adm_err = std::fabs(admissibility_residual(s.point, v));
  return r;
}

DriftReport invariant_drift(const Trajectory& traj) {
  DriftReport d;
  for (const ResidualSample& r : traj.residuals) {
    d.h = std::max(d.h, r.h_err);
    d.px = std::max(d.px, r.px_drift);
    d.py = std::max(d.py, r.py_drift);
    d.speed = std::max(d.speed, r.speed_err);
    d.admissibility = std::max(d.admissibility, r.adm_err);
  }
  return d;
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
  out << "t,x,y,z,px,py,pz,H,speed_err,adm_err\n";
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const PhaseState& s = traj.states[i];
    const ResidualSample& r = traj.residuals[i];
    out << format_double(traj.times[i], 17) << ','
        << format_double(s.point.x, 17) << ',' << format_double(s.point.y, 17)
        << ',' << format_double(s.point.z, 17) << ','
        << format_double(s.px, 17) << ',' << format_double(s.py, 17) << ','
        << format_double(s.pz, 17) << ',' << format_double(hamiltonian(s), 17)
        << ',' << format_double(r.speed_err, 17) << ','
        << format_double(r.adm_err, 17) << '\n';
  }
}

}  // namespace solvgeo
