#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace solvgeo::verify {

/// Outcome of one property check: the worst absolute deviation seen over
/// all samples, the tolerance it was held to, and the parameters of the
/// extremal sample (for replay).
struct CheckResult {
  std::string name;
  double worst = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string worst_at;
};

struct Report {
  std::string suite;
  std::uint64_t seed = 0;
  int n = 0;
  std::vector<CheckResult> checks;
  bool pass = false;

  std::string to_json() const;
};

/// Run a named verification suite:
///   elliptic     - Jacobi/Legendre identities and quadrature cross-checks
///   conservation - invariants of the integrated flow
///   oracle       - closed-form geodesics against the integrator
///   symmetry     - the swap reflection (x,y,z) -> (y,x,-z)
///   all          - all of the above
/// n = 0 selects the per-suite default sample count. Unknown suite names
/// and negative counts throw std::invalid_argument.
Report run(const std::string& suite, std::uint64_t seed, int n);

}  // namespace solvgeo::verify
