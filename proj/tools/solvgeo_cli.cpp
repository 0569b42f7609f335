// solvgeo command-line front end. Talks to the library exclusively through
// the public C interface; everything here is argument plumbing and output
// formatting.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "solvgeo/solvgeo.h"

namespace {

// stdout gets 15 significant digits (readable), CSV files 17 (round-trip).
constexpr int kStdoutDigits = 15;
constexpr int kCsvDigits = 17;

std::string fmt(double v, int digits) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v,
                           std::chars_format::general, digits);
  if (res.ec != std::errc()) return "nan";
  return std::string(buf, res.ptr);
}

[[noreturn]] void die(solvgeo_status st) {
  std::cerr << "error: " << solvgeo_last_error() << '\n';
  std::exit(st == SOLVGEO_ERR_VERIFICATION ? 1 : 2);
}

void check(solvgeo_status st) {
  if (st != SOLVGEO_OK) die(st);
}

struct TrajectoryDeleter {
  void operator()(solvgeo_trajectory* p) const { solvgeo_trajectory_destroy(p); }
};
struct GeodesicDeleter {
  void operator()(solvgeo_geodesic* p) const { solvgeo_geodesic_destroy(p); }
};
struct SphereDeleter {
  void operator()(solvgeo_sphere* p) const { solvgeo_sphere_destroy(p); }
};
using TrajectoryPtr = std::unique_ptr<solvgeo_trajectory, TrajectoryDeleter>;
using GeodesicPtr = std::unique_ptr<solvgeo_geodesic, GeodesicDeleter>;
using SpherePtr = std::unique_ptr<solvgeo_sphere, SphereDeleter>;

std::vector<double> linspace(double t_max, int n) {
  std::vector<double> ts(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    ts[static_cast<std::size_t>(i)] = t_max * i / (n - 1);
  }
  ts.back() = t_max;
  return ts;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot open '" << path << "' for writing\n";
    std::exit(2);
  }
  return out;
}

// --- geodesic ------------------------------------------------------------

struct GeodesicArgs {
  double a = 0.0;
  double b = 0.0;
  std::string pz_sign = "+";
  double t_max = 1.0;
  int samples = 101;
  std::string method = "closed";
  double tol = 1e-12;
  std::string out = "geodesic.csv";
};

int run_geodesic(const GeodesicArgs& args) {
  if (args.samples < 2) {
    std::cerr << "error: --samples must be at least 2\n";
    return 2;
  }
  if (!(args.t_max > 0.0)) {
    std::cerr << "error: --t-max must be positive\n";
    return 2;
  }
  solvgeo_covector cov;
  check(solvgeo_covector_from_ab(args.a, args.b, args.pz_sign == "-" ? -1 : +1,
                                 &cov));
  GeodesicPtr geo;
  {
    solvgeo_geodesic* raw = nullptr;
    check(solvgeo_geodesic_create(&cov, &raw));
    geo.reset(raw);
  }

  std::vector<double> times = linspace(args.t_max, args.samples);
  TrajectoryPtr closed, ode;
  if (args.method == "closed" || args.method == "both") {
    solvgeo_trajectory* raw = nullptr;
    check(solvgeo_geodesic_sample(geo.get(), times.data(), times.size(), &raw));
    closed.reset(raw);
  }
  if (args.method == "ode" || args.method == "both") {
    solvgeo_trajectory* raw = nullptr;
    check(solvgeo_flow_integrate(&cov, times.data(), times.size(), args.tol,
                                 &raw));
    ode.reset(raw);
  }

  if (args.method == "both") {
    // Side-by-side table with a per-sample deviation column.
    std::ofstream out = open_out(args.out);
    out << "t,x,y,z,px,py,pz,x_ode,y_ode,z_ode,px_ode,py_ode,pz_ode,"
           "deviation\n";
    for (std::size_t i = 0; i < times.size(); ++i) {
      double t = 0.0;
      solvgeo_state c{}, o{};
      check(solvgeo_trajectory_get(closed.get(), i, &t, &c));
      check(solvgeo_trajectory_get(ode.get(), i, nullptr, &o));
      double dev = std::max({std::fabs(c.x - o.x), std::fabs(c.y - o.y),
                             std::fabs(c.z - o.z), std::fabs(c.px - o.px),
                             std::fabs(c.py - o.py), std::fabs(c.pz - o.pz)});
      out << fmt(t, kCsvDigits) << ',' << fmt(c.x, kCsvDigits) << ','
          << fmt(c.y, kCsvDigits) << ',' << fmt(c.z, kCsvDigits) << ','
          << fmt(c.px, kCsvDigits) << ',' << fmt(c.py, kCsvDigits) << ','
          << fmt(c.pz, kCsvDigits) << ',' << fmt(o.x, kCsvDigits) << ','
          << fmt(o.y, kCsvDigits) << ',' << fmt(o.z, kCsvDigits) << ','
          << fmt(o.px, kCsvDigits) << ',' << fmt(o.py, kCsvDigits) << ','
          << fmt(o.pz, kCsvDigits) << ',' << fmt(dev, kCsvDigits) << '\n';
    }
  } else {
    const TrajectoryPtr& tr = args.method == "closed" ? closed : ode;
    check(solvgeo_trajectory_write_csv(tr.get(), args.out.c_str()));
  }

  char* meta = nullptr;
  check(solvgeo_geodesic_metadata_json(geo.get(), &meta));
  std::cout << meta << '\n';
  solvgeo_string_free(meta);
  return 0;
}

// --- verify ----------------------------------------------------------------

struct VerifyArgs {
  std::string suite = "all";
  std::uint64_t seed = 7;
  int n = 0;
  std::string out;
};

int run_verify(const VerifyArgs& args) {
  char* report = nullptr;
  solvgeo_status st =
      solvgeo_verify(args.suite.c_str(), args.seed, args.n, &report);
  if (report != nullptr) {
    if (args.out.empty()) {
      std::cout << report << '\n';
    } else {
      std::ofstream out = open_out(args.out);
      out << report << '\n';
    }
    solvgeo_string_free(report);
  }
  if (st == SOLVGEO_OK) return 0;
  std::cerr << "error: " << solvgeo_last_error() << '\n';
  return st == SOLVGEO_ERR_VERIFICATION ? 1 : 2;
}

// --- sphere ----------------------------------------------------------------

struct SphereArgs {
  double r = 0.0;
  solvgeo_sphere_spec spec{};
  std::string grid = "32x32";
  std::string format = "csv";
  bool exp_z = false;
  std::string out;
};

int run_sphere(SphereArgs& args) {
  int nt = 0, nm = 0;
  {
    auto sep = args.grid.find('x');
    bool ok = sep != std::string::npos;
    if (ok) {
      try {
        nt = std::stoi(args.grid.substr(0, sep));
        nm = std::stoi(args.grid.substr(sep + 1));
      } catch (const std::exception&) {
        ok = false;
      }
    }
    if (!ok || nt < 2 || nm < 2) {
      std::cerr << "error: --grid expects NxM with N, M >= 2, got '"
                << args.grid << "'\n";
      return 2;
    }
  }
  args.spec.radius = args.r;
  args.spec.n_theta = nt;
  args.spec.n_mu = nm;

  SpherePtr sphere;
  {
    solvgeo_sphere* raw = nullptr;
    check(solvgeo_sphere_sample(&args.spec, &raw));
    sphere.reset(raw);
  }

  std::string out_path =
      args.out.empty() ? ("sphere." + args.format) : args.out;
  if (args.format == "obj") {
    check(solvgeo_sphere_write_obj(sphere.get(), out_path.c_str(),
                                   args.exp_z ? 1 : 0));
  } else {
    check(solvgeo_sphere_write_csv(sphere.get(), out_path.c_str(),
                                   args.exp_z ? 1 : 0));
  }

  size_t closed = 0, fallback = 0, failed = 0;
  check(solvgeo_sphere_stats(sphere.get(), &closed, &fallback, &failed));
  std::cout << "wrote " << out_path << ": nodes=" << (closed + fallback + failed)
            << " closed_form=" << closed << " ode_fallback=" << fallback
            << " failed=" << failed << '\n';
  return 0;
}

// --- elliptic ----------------------------------------------------------------

struct EllipticArgs {
  std::string fn;
  double u = 0.0;
  double k = 0.0;
};

int run_elliptic(const EllipticArgs& args) {
  double value = 0.0;
  check(solvgeo_elliptic_eval(args.fn.c_str(), args.u, args.k, &value));
  std::cout << fmt(value, kStdoutDigits) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "solvgeo: closed-form sub-Riemannian geodesics on the solvable group "
      "SOLV, with a numerical Hamiltonian flow as independent check"};
  app.require_subcommand(1);

  GeodesicArgs ga;
  CLI::App* geodesic = app.add_subcommand(
      "geodesic",
      "Evaluate one geodesic; writes a trajectory CSV and prints a JSON "
      "metadata record to stdout");
  geodesic->add_option("--a", ga.a, "Initial a = px/sqrt(2)")->required();
  geodesic->add_option("--b", ga.b, "Initial b = py/sqrt(2)")->required();
  geodesic
      ->add_option("--pz-sign", ga.pz_sign,
                   "Sign of the initial vertical momentum pz0")
      ->check(CLI::IsMember({"+", "-"}))
      ->capture_default_str();
  geodesic->add_option("--t-max", ga.t_max, "Arc-length horizon")
      ->capture_default_str();
  geodesic->add_option("--samples", ga.samples, "Number of sample times")
      ->capture_default_str();
  geodesic
      ->add_option("--method", ga.method,
                   "closed: elliptic formulas; ode: numerical flow; both: "
                   "side-by-side with a deviation column")
      ->check(CLI::IsMember({"closed", "ode", "both"}))
      ->capture_default_str();
  geodesic->add_option("--tol", ga.tol, "Integrator tolerance (ode/both)")
      ->capture_default_str();
  geodesic->add_option("--out", ga.out, "Trajectory CSV path")
      ->capture_default_str();

  VerifyArgs va;
  CLI::App* verify = app.add_subcommand(
      "verify", "Run randomized verification suites; exit 1 on violation");
  verify
      ->add_option("--suite", va.suite,
                   "elliptic, conservation, oracle, symmetry or all")
      ->check(CLI::IsMember(
          {"elliptic", "conservation", "oracle", "symmetry", "all"}))
      ->capture_default_str();
  verify->add_option("--seed", va.seed, "Random seed")->capture_default_str();
  verify->add_option("--n", va.n, "Sample count (0 = suite default)")
      ->capture_default_str();
  verify->add_option("--out", va.out, "Report JSON path (default: stdout)");

  SphereArgs sa;
  solvgeo_sphere_spec_defaults(&sa.spec);
  CLI::App* sphere = app.add_subcommand(
      "sphere", "Sample a geodesic sphere as a point cloud or quad mesh");
  sphere->add_option("--r", sa.r, "Sphere radius (arc length)")->required();
  sphere->add_option("--theta-min", sa.spec.theta_min, "Grid theta lower bound")
      ->capture_default_str();
  sphere->add_option("--theta-max", sa.spec.theta_max, "Grid theta upper bound")
      ->capture_default_str();
  sphere->add_option("--mu-min", sa.spec.mu_min, "Grid mu lower bound")
      ->capture_default_str();
  sphere->add_option("--mu-max", sa.spec.mu_max, "Grid mu upper bound")
      ->capture_default_str();
  sphere->add_option("--grid", sa.grid, "Grid size NxM")->capture_default_str();
  sphere->add_option("--format", sa.format, "Output format")
      ->check(CLI::IsMember({"csv", "obj"}))
      ->capture_default_str();
  sphere->add_flag("--exp-z", sa.exp_z,
                   "Emit e^z instead of z as the third coordinate");
  sphere->add_option("--out", sa.out,
                     "Output path (default: sphere.csv / sphere.obj)");

  EllipticArgs ea;
  CLI::App* elliptic = app.add_subcommand(
      "elliptic", "Evaluate the elliptic kernel (testing access)");
  elliptic
      ->add_option("--fn", ea.fn, "One of sn, cn, dn, am (at u) or F, E (at phi)")
      ->required()
      ->check(CLI::IsMember({"sn", "cn", "dn", "am", "F", "E"}));
  CLI::Option* opt_u =
      elliptic->add_option("--u", ea.u, "Argument of sn/cn/dn/am");
  CLI::Option* opt_phi =
      elliptic->add_option("--phi", ea.u, "Amplitude of F/E");
  opt_u->excludes(opt_phi);
  opt_phi->excludes(opt_u);
  elliptic->add_option("--k", ea.k, "Elliptic modulus, 0 <= k < 1")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);  // prints help or the parse error
    return code == 0 ? 0 : 2;
  }

  if (geodesic->parsed()) return run_geodesic(ga);
  if (verify->parsed()) return run_verify(va);
  if (sphere->parsed()) return run_sphere(sa);
  if (elliptic->parsed()) {
    if (opt_u->count() == 0 && opt_phi->count() == 0) {
      std::cerr << "error: provide --u (sn/cn/dn/am) or --phi (F/E)\n";
      return 2;
    }
    return run_elliptic(ea);
  }
  return 2;
}
