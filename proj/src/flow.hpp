#pragma once

#include <array>
#include <span>
#include <stdexcept>

#include "model.hpp"
#include "trajectory.hpp"

namespace solvgeo::flow {

/// Phase-space derivative (dx, dy, dz, dpx, dpy, dpz) of Hamilton's
/// equations for the normal Hamiltonian. px and py are cyclic: their
/// components are identically zero.
std::array<double, 6> hamiltonian_rhs(const PhaseState& s);

/// Raised when the step-size controller collapses or the step budget is
/// exhausted; carries whatever samples were completed.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, Trajectory partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const Trajectory& partial() const { return partial_; }

 private:
  Trajectory partial_;
};

/// Integrate the geodesic flow from the identity with initial covector c,
/// reporting dense output at the requested times (nondecreasing, first >= 0).
/// tol is used as both absolute and relative tolerance of the embedded
/// Dormand-Prince 5(4) error estimate.
Trajectory integrate(const NormalizedCovector& c, std::span<const double> times,
                     double tol);

/// Convenience overload: n_samples uniformly spaced times on [0, t_max].
Trajectory integrate(const NormalizedCovector& c, double t_max, double tol,
                     int n_samples = 129);

}  // namespace solvgeo::flow
