#include "closedform.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "format.hpp"

namespace solvgeo::closedform {

namespace {

constexpr double kSqrt2 = 1.414213562373095048801688724209698079;
constexpr double kLn2 = 0.693147180559945309417232121458176568;

// log(cosh(w)) without overflow for large |w|.
double log_cosh(double w) {
  double aw = std::fabs(w);
  return aw + std::log1p(std::exp(-2.0 * aw)) - kLn2;
}

void require_normalized(const NormalizedCovector& c) {
  if (!std::isfinite(c.a) || !std::isfinite(c.b) || !std::isfinite(c.pz0)) {
    throw std::domain_error("covector components must be finite");
  }
  double res = normalization_residual(c);
  if (std::fabs(res) > 1e-9) {
    throw std::domain_error(
        "covector is not normalized: (a+b)^2 + pz0^2 - 1 = " +
        format_double(res, 6) + "; rescale it onto H = 1/2 first");
  }
}

PhaseState eval_vertical(const NormalizedCovector& c, double t) {
  PhaseState s;
  s.point = GroupPoint{0.0, 0.0, c.pz0 * t};
  s.px = c.px();
  s.py = c.py();
  s.pz = c.pz0;
  return s;
}

PhaseState eval_a_zero(const NormalizedCovector& c, double t) {
  // z descends along -log cosh; the time shift places the crest where the
  // vertical momentum vanishes.
  double ab = std::fabs(c.b);
  double t1 = std::copysign(std::acosh(std::fmax(1.0, 1.0 / ab)), c.pz0);
  double w = t - t1;
  PhaseState s;
  s.point.x = c.b * t / kSqrt2;
  s.point.y = (std::tanh(w) + std::tanh(t1)) / (kSqrt2 * c.b);
  s.point.z = -(std::log(ab) + log_cosh(w));
  s.px = c.px();
  s.py = c.py();
  s.pz = -std::tanh(w);
  return s;
}

PhaseState eval_b_zero(const NormalizedCovector& c, double t) {
  double aa = std::fabs(c.a);
  double t2 = std::copysign(std::acosh(std::fmax(1.0, 1.0 / aa)), c.pz0);
  double w = t + t2;
  PhaseState s;
  s.point.x = (std::tanh(w) - std::tanh(t2)) / (kSqrt2 * c.a);
  s.point.y = c.a * t / kSqrt2;
  s.point.z = std::log(aa) + log_cosh(w);
  s.px = c.px();
  s.py = c.py();
  s.pz = std::tanh(w);
  return s;
}

PhaseState eval_line(const NormalizedCovector& c, double t) {
  // a = b = +-1/2: the geodesic is the horizontal line x = y, z = 0.
  double v = (c.a + c.b) * t / kSqrt2;
  PhaseState s;
  s.point = GroupPoint{v, v, 0.0};
  s.px = c.px();
  s.py = c.py();
  s.pz = 0.0;
  return s;
}

PhaseState eval_generic(const NormalizedCovector& c, const GenericParams& p,
                        double t) {
  using elliptic::incomplete_e;
  using elliptic::jacobi;
  double v = p.omega * t + p.v0;
  elliptic::JacobiTriple jt = jacobi(v, p.modulus);
  double e_am = incomplete_e(jt.am, p.modulus);
  double sncd = jt.sn * jt.cn / jt.dn;
  double g = e_am - p.modulus.k2() * sncd;
  PhaseState s;
  s.point.x = p.coef_x * g + p.x_const + c.b * t / kSqrt2;
  s.point.y = p.coef_y * e_am + p.y_const + c.a * t / kSqrt2;
  s.point.z = std::log(p.sigma1 * jt.dn);
  s.px = c.px();
  s.py = c.py();
  s.pz = -p.omega * p.modulus.k2() * sncd;
  return s;
}

}  // namespace

const char* case_name(GeodesicCase c) {
  switch (c) {
    case GeodesicCase::generic:
      return "generic";
    case GeodesicCase::vertical:
      return "vertical";
    case GeodesicCase::a_zero:
      return "a_zero";
    case GeodesicCase::b_zero:
      return "b_zero";
    case GeodesicCase::line:
      return "line";
  }
  return "unknown";
}

GeodesicCase classify(const NormalizedCovector& c, double eps) {
  require_normalized(c);
  bool a_small = std::fabs(c.a) <= eps;
  bool b_small = std::fabs(c.b) <= eps;
  if (a_small && b_small) return GeodesicCase::vertical;
  if (a_small) return GeodesicCase::a_zero;
  if (b_small) return GeodesicCase::b_zero;
  if (std::fabs(c.a * c.b - 0.25) <= eps) return GeodesicCase::line;
  return GeodesicCase::generic;
}

GenericParams generic_params(const NormalizedCovector& c) {
  require_normalized(c);
  double prod = c.a * c.b;
  if (!(std::fabs(c.a) > 0.0) || !(std::fabs(c.b) > 0.0) || prod >= 0.25) {
    throw std::domain_error(
        "generic branch requires a != 0, b != 0 and ab < 1/4");
  }
  double root = std::sqrt(1.0 - 4.0 * prod);
  double sigma1 = std::sqrt((1.0 - 2.0 * prod + root) / (2.0 * c.b * c.b));
  // Vieta: sigma1^2 sigma2^2 = a^2/b^2, which avoids the cancellation in
  // the direct-root expression for sigma2 when ab -> 0.
  double sigma2 = std::fabs(c.a / c.b) / sigma1;
  auto modulus = elliptic::EllipticModulus::from_kprime(
      std::fmin(sigma2 / sigma1, 1.0));
  double omega = sigma1 * c.b;
  // Initial phase: dn(v0) = 1/sigma1 puts e^{z(0)} = 1, and the branch of
  // v0 is fixed by matching the sign of the initial vertical momentum.
  double w = std::fmin(1.0, std::fmax(modulus.kprime(), 1.0 / sigma1));
  double vstar = elliptic::inverse_dn(w, modulus);
  double v0 = (c.pz0 * c.b > 0.0) ? -vstar : vstar;
  GenericParams p{c.a,    c.b, c.pz0, sigma1, sigma2, modulus,
                  omega,  v0,  -v0 / omega,  0.0,    0.0,
                  0.0,    0.0};
  elliptic::JacobiTriple j0 = elliptic::jacobi(v0, modulus);
  double e0 = elliptic::incomplete_e(j0.am, modulus);
  double g0 = e0 - modulus.k2() * j0.sn * j0.cn / j0.dn;
  p.coef_y = sigma1 / kSqrt2;
  p.y_const = -p.coef_y * e0;
  p.coef_x = sigma1 * c.b / (kSqrt2 * c.a);
  p.x_const = -p.coef_x * g0;
  return p;
}

Geodesic::Geodesic(const NormalizedCovector& c)
    : c_(c), nominal_(classify(c)), dispatch_(nominal_) {
  if (nominal_ == GeodesicCase::generic) {
    params_ = generic_params(c);
    if (params_->modulus.kprime() < kKprimeFallback) {
      // k' ~ |ab| here: zeroing the smaller momentum component perturbs the
      // curve by less than double precision can resolve on these time spans.
      dispatch_ = (std::fabs(c.a) <= std::fabs(c.b)) ? GeodesicCase::a_zero
                                                     : GeodesicCase::b_zero;
      params_.reset();
    }
  }
}

PhaseState Geodesic::eval(double t) const {
  if (!std::isfinite(t)) {
    throw std::domain_error("evaluation time must be finite");
  }
  switch (dispatch_) {
    case GeodesicCase::generic:
      return eval_generic(c_, *params_, t);
    case GeodesicCase::vertical:
      return eval_vertical(c_, t);
    case GeodesicCase::a_zero:
      return eval_a_zero(c_, t);
    case GeodesicCase::b_zero:
      return eval_b_zero(c_, t);
    case GeodesicCase::line:
      return eval_line(c_, t);
  }
  throw std::logic_error("unreachable geodesic case");
}

Trajectory Geodesic::sample(std::span<const double> times) const {
  Trajectory out;
  out.times.reserve(times.size());
  out.states.reserve(times.size());
  out.residuals.reserve(times.size());
  for (double t : times) {
    PhaseState s = eval(t);
    out.times.push_back(t);
    out.states.push_back(s);
    out.residuals.push_back(residual_sample(s, c_));
  }
  return out;
}

std::string Geodesic::metadata_json() const {
  nlohmann::json j;
  j["a"] = c_.a;
  j["b"] = c_.b;
  j["pz0"] = c_.pz0;
  j["case"] = case_name(dispatch_);
  if (params_) {
    j["sigma1"] = params_->sigma1;
    j["sigma2"] = params_->sigma2;
    j["k"] = params_->modulus.k();
    j["t0"] = params_->t0;
  } else {
    j["sigma1"] = nullptr;
    j["sigma2"] = nullptr;
    j["k"] = nullptr;
    j["t0"] = nullptr;
  }
  return j.dump();
}

PhaseState eval(const NormalizedCovector& c, double t) {
  return Geodesic(c).eval(t);
}

Trajectory eval_trajectory(const NormalizedCovector& c,
                           std::span<const double> times) {
  return Geodesic(c).sample(times);
}

}  // namespace solvgeo::closedform
