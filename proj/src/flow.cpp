#include "flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace solvgeo::flow {

namespace {

using Y = std::array<double, 6>;

constexpr double kEps = std::numeric_limits<double>::epsilon();

Y rhs_raw(const Y& y) {
  double ez = std::exp(y[2]);
  double iez = 1.0 / ez;
  double px = y[3], py = y[4], pz = y[5];
  return Y{0.5 * iez * iez * px + 0.5 * py,
           0.5 * ez * ez * py + 0.5 * px,
           pz,
           0.0,
           0.0,
           0.5 * iez * iez * px * px - 0.5 * ez * ez * py * py};
}

PhaseState to_state(const Y& y) {
  return PhaseState{GroupPoint{y[0], y[1], y[2]}, y[3], y[4], y[5]};
}

// Dormand-Prince 5(4) tableau (Hairer, Norsett & Wanner, DOPRI5).
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// Dense-output weights of the quartic interpolant.
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

struct DenseStep {
  Y cont1, cont2, cont3, cont4, cont5;

  Y eval(double theta) const {
    Y y;
    double th1 = 1.0 - theta;
    for (int i = 0; i < 6; ++i) {
      y[i] = cont1[i] +
             theta * (cont2[i] +
                      th1 * (cont3[i] + theta * (cont4[i] + th1 * cont5[i])));
    }
    return y;
  }
};

double error_norm(const Y& y0, const Y& y1, const Y& err, double tol) {
  double sum = 0.0;
  for (int i = 0; i < 6; ++i) {
    double sc = tol + tol * std::max(std::fabs(y0[i]), std::fabs(y1[i]));
    double r = err[i] / sc;
    sum += r * r;
  }
  return std::sqrt(sum / 6.0);
}

double scaled_rms(const Y& v, const Y& ref, double tol) {
  double sum = 0.0;
  for (int i = 0; i < 6; ++i) {
    double sc = tol + tol * std::fabs(ref[i]);
    double r = v[i] / sc;
    sum += r * r;
  }
  return std::sqrt(sum / 6.0);
}

double initial_step(const Y& y0, const Y& f0, double h_max, double tol) {
  double d0 = scaled_rms(y0, y0, tol);
  double d1 = scaled_rms(f0, y0, tol);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min(h0, h_max);
  Y ye;
  for (int i = 0; i < 6; ++i) ye[i] = y0[i] + h0 * f0[i];
  Y f1 = rhs_raw(ye);
  Y df;
  for (int i = 0; i < 6; ++i) df[i] = f1[i] - f0[i];
  double d2 = scaled_rms(df, y0, tol) / h0;
  double dm = std::max(d1, d2);
  double h1 = (dm <= 1e-15) ? std::max(1e-6, h0 * 1e-3)
                            : std::pow(0.01 / dm, 0.2);
  return std::min({100.0 * h0, h1, h_max});
}

}  // namespace

std::array<double, 6> hamiltonian_rhs(const PhaseState& s) {
  return rhs_raw(Y{s.point.x, s.point.y, s.point.z, s.px, s.py, s.pz});
}

Trajectory integrate(const NormalizedCovector& c, std::span<const double> times,
                     double tol) {
  if (!(tol > 0.0) || tol > 1e-2) {
    throw std::domain_error("integration tolerance must lie in (0, 1e-2]");
  }
  tol = std::max(tol, 1e-14);
  if (times.empty()) return Trajectory{};
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i]) || times[i] < 0.0 ||
        (i > 0 && times[i] < times[i - 1])) {
      throw std::invalid_argument(
          "sample times must be finite, nonnegative and nondecreasing");
    }
  }

  Trajectory out;
  out.times.reserve(times.size());
  out.states.reserve(times.size());
  out.residuals.reserve(times.size());
  auto emit = [&](double ts, const Y& ys) {
    PhaseState s = to_state(ys);
    out.times.push_back(ts);
    out.states.push_back(s);
    out.residuals.push_back(residual_sample(s, c));
  };

  Y y{0.0, 0.0, 0.0, c.px(), c.py(), c.pz0};
  double t = 0.0;
  std::size_t next = 0;
  while (next < times.size() && times[next] <= 0.0) emit(times[next++], y);
  if (next == times.size()) return out;

  const double t_end = times.back();
  // Cap the step so the quartic interpolant stays within the tolerance:
  // its local error is O(h^5), so h ~ tol^(1/5) keeps it at O(tol).
  const double h_max = std::max(1e-3, std::pow(tol, 0.2));
  const double safety = 0.9, fac_min = 0.2, fac_max = 5.0;
  const double alpha = 0.7 / 5.0, beta = 0.4 / 5.0;  // PI controller

  Y k1 = rhs_raw(y);
  double h = std::min(initial_step(y, k1, h_max, tol), t_end);
  double err_old = 1e-4;
  bool rejected = false;
  long steps = 0;
  const long max_steps = 10'000'000;

  while (t < t_end) {
    if (++steps > max_steps) {
      throw IntegrationError(
          "geodesic flow integration exceeded the step budget at t = " +
              std::to_string(t),
          std::move(out));
    }
    if (h < 1e4 * kEps * std::max(1.0, std::fabs(t))) {
      throw IntegrationError(
          "geodesic flow step size collapsed at t = " + std::to_string(t),
          std::move(out));
    }
    bool last = false;
    if (t + h >= t_end) {
      h = t_end - t;
      last = true;
    }

    Y k2, k3, k4, k5, k6, k7, yt, y1, yerr;
    for (int i = 0; i < 6; ++i) yt[i] = y[i] + h * a21 * k1[i];
    k2 = rhs_raw(yt);
    for (int i = 0; i < 6; ++i) yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    k3 = rhs_raw(yt);
    for (int i = 0; i < 6; ++i)
      yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    k4 = rhs_raw(yt);
    for (int i = 0; i < 6; ++i)
      yt[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    k5 = rhs_raw(yt);
    for (int i = 0; i < 6; ++i)
      yt[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                          a64 * k4[i] + a65 * k5[i]);
    k6 = rhs_raw(yt);
    for (int i = 0; i < 6; ++i)
      y1[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] +
                          a75 * k5[i] + a76 * k6[i]);
    k7 = rhs_raw(y1);
    for (int i = 0; i < 6; ++i)
      yerr[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                     e6 * k6[i] + e7 * k7[i]);

    double err = error_norm(y, y1, yerr, tol);
    if (err <= 1.0) {
      DenseStep dense;
      for (int i = 0; i < 6; ++i) {
        double ydiff = y1[i] - y[i];
        double bspl = h * k1[i] - ydiff;
        dense.cont1[i] = y[i];
        dense.cont2[i] = ydiff;
        dense.cont3[i] = bspl;
        dense.cont4[i] = ydiff - h * k7[i] - bspl;
        dense.cont5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] +
                              d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
      }
      while (next < times.size() && (times[next] <= t + h || last)) {
        double theta = std::clamp((times[next] - t) / h, 0.0, 1.0);
        emit(times[next], dense.eval(theta));
        ++next;
      }
      if (last) break;
      t += h;
      y = y1;
      k1 = k7;  // first-same-as-last
      double fac = safety * std::pow(err, -alpha) * std::pow(err_old, beta);
      fac = std::clamp(fac, fac_min, rejected ? 1.0 : fac_max);
      h = std::min(h * fac, h_max);
      err_old = std::max(err, 1e-4);
      rejected = false;
    } else {
      h *= std::clamp(safety * std::pow(err, -0.2), fac_min, 1.0);
      rejected = true;
    }
  }
  return out;
}

Trajectory integrate(const NormalizedCovector& c, double t_max, double tol,
                     int n_samples) {
  if (!(t_max > 0.0) || !std::isfinite(t_max)) {
    throw std::domain_error("t_max must be positive and finite");
  }
  if (n_samples < 2) {
    throw std::invalid_argument("need at least two samples");
  }
  std::vector<double> times(static_cast<std::size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i) {
    times[static_cast<std::size_t>(i)] = t_max * i / (n_samples - 1);
  }
  times.back() = t_max;
  return integrate(c, times, tol);
}

}  // namespace solvgeo::flow
