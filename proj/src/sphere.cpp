#include "sphere.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "closedform.hpp"
#include "flow.hpp"
#include "format.hpp"
#include "trajectory.hpp"

namespace solvgeo::sphere {

namespace {

constexpr double kSqrt2 = 1.414213562373095048801688724209698079;
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// Residual bound deciding whether a closed-form endpoint is trusted.
constexpr double kResidualGate = 1e-8;

int thread_count(int rows) {
  long n = 0;
  if (const char* env = std::getenv("SOL_GEODESICS_THREADS")) {
    char* end = nullptr;
    n = std::strtol(env, &end, 10);
    if (end == env) n = 0;
  }
  if (n <= 0) n = static_cast<long>(std::thread::hardware_concurrency());
  if (n <= 0) n = 1;
  return static_cast<int>(std::min<long>({n, rows, 256}));
}

SpherePoint sample_node(double theta, double mu, double radius) {
  SpherePoint pt;
  pt.theta = theta;
  pt.mu = mu;
  pt.endpoint = GroupPoint{kNan, kNan, kNan};
  NormalizedCovector c;
  try {
    c = covector_from_grid(theta, mu);
  } catch (const std::exception&) {
    return pt;  // chart singularity: failed node
  }
  try {
    closedform::Geodesic geo(c);
    PhaseState s = geo.eval(radius);
    ResidualSample r = residual_sample(s, c);
    if (std::isfinite(s.point.x) && std::isfinite(s.point.y) &&
        std::isfinite(s.point.z) && r.h_err <= kResidualGate) {
      pt.endpoint = s.point;
      pt.method = SampleMethod::closed_form;
      return pt;
    }
  } catch (const std::exception&) {
    // fall through to the integrator
  }
  try {
    const double times[1] = {radius};
    Trajectory tr = flow::integrate(c, times, 1e-10);
    if (tr.size() == 1) {
      const GroupPoint& p = tr.states[0].point;
      if (std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z)) {
        pt.endpoint = p;
        pt.method = SampleMethod::ode_fallback;
      }
    }
  } catch (const std::exception&) {
    // failed node keeps NaN coordinates
  }
  return pt;
}

}  // namespace

NormalizedCovector covector_from_grid(double theta, double mu) {
  if (!std::isfinite(theta) || !std::isfinite(mu)) {
    throw std::domain_error("grid parameters must be finite");
  }
  double pz0 = std::sin(theta);
  double s = std::cos(theta);  // a + b
  double d = 0.0;              // b - a
  if (mu != 0.0) {
    if (std::fabs(pz0) < 1e-12) {
      throw std::domain_error(
          "grid chart is singular at sin(theta) = 0 unless mu = 0");
    }
    d = mu / (kSqrt2 * pz0);
  }
  return NormalizedCovector{0.5 * (s - d), 0.5 * (s + d), pz0};
}

SphereGrid sample_sphere(const GridSpec& spec) {
  if (!(spec.radius > 0.0) || !std::isfinite(spec.radius)) {
    throw std::domain_error("sphere radius must be positive and finite");
  }
  if (spec.n_theta < 2 || spec.n_mu < 2) {
    throw std::invalid_argument("sphere grid needs at least 2x2 nodes");
  }
  if (!(spec.theta_min < spec.theta_max) || !(spec.mu_min < spec.mu_max)) {
    throw std::invalid_argument("sphere grid ranges must be increasing");
  }

  SphereGrid grid;
  grid.spec = spec;
  grid.points.resize(static_cast<std::size_t>(spec.n_theta) *
                     static_cast<std::size_t>(spec.n_mu));

  auto run_rows = [&](int first_row, int stride) {
    for (int i = first_row; i < spec.n_theta; i += stride) {
      double theta = spec.theta_min + (spec.theta_max - spec.theta_min) * i /
                                          (spec.n_theta - 1);
      for (int j = 0; j < spec.n_mu; ++j) {
        double mu =
            spec.mu_min + (spec.mu_max - spec.mu_min) * j / (spec.n_mu - 1);
        grid.points[static_cast<std::size_t>(i) *
                        static_cast<std::size_t>(spec.n_mu) +
                    static_cast<std::size_t>(j)] =
            sample_node(theta, mu, spec.radius);
      }
    }
  };

  int workers = thread_count(spec.n_theta);
  if (workers <= 1) {
    run_rows(0, 1);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(run_rows, w, workers);
    for (std::thread& th : pool) th.join();
  }
  return grid;
}

namespace {

double third_coordinate(const GroupPoint& p, bool exp_z) {
  return exp_z ? std::exp(p.z) : p.z;
}

}  // namespace

void write_csv(const SphereGrid& grid, std::ostream& out, bool exp_z) {
  out << "theta,mu,x,y,z\n";
  for (const SpherePoint& pt : grid.points) {
    out << format_double(pt.theta, 17) << ',' << format_double(pt.mu, 17)
        << ',' << format_double(pt.endpoint.x, 17) << ','
        << format_double(pt.endpoint.y, 17) << ','
        << format_double(third_coordinate(pt.endpoint, exp_z), 17) << '\n';
  }
}

void write_obj(const SphereGrid& grid, std::ostream& out, bool exp_z) {
  for (const SpherePoint& pt : grid.points) {
    out << "v " << format_double(pt.endpoint.x, 17) << ' '
        << format_double(pt.endpoint.y, 17) << ' '
        << format_double(third_coordinate(pt.endpoint, exp_z), 17) << '\n';
  }
  int nt = grid.spec.n_theta, nm = grid.spec.n_mu;
  for (int i = 0; i + 1 < nt; ++i) {
    for (int j = 0; j + 1 < nm; ++j) {
      const SpherePoint* corners[4] = {&grid.at(i, j), &grid.at(i, j + 1),
                                       &grid.at(i + 1, j + 1),
                                       &grid.at(i + 1, j)};
      bool ok = true;
      for (const SpherePoint* c : corners) {
        if (c->method == SampleMethod::failed) ok = false;
      }
      if (!ok) continue;
      out << "f " << (i * nm + j + 1) << ' ' << (i * nm + j + 2) << ' '
          << ((i + 1) * nm + j + 2) << ' ' << ((i + 1) * nm + j + 1) << '\n';
    }
  }
}

}  // namespace solvgeo::sphere
