#include "closedform.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "flow.hpp"
#include "support/oracles.hpp"

using namespace solvgeo;
using closedform::Geodesic;
using closedform::GeodesicCase;

namespace {

constexpr double kInvSqrt2 = 0.707106781186547524400844362104849039;

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

// Generic covector sampler mirroring the acceptance envelope:
// 1e-3 <= |a|, |b| <= 1 with ab < 1/4 - 1e-3.
NormalizedCovector random_generic(std::mt19937_64& rng) {
  for (;;) {
    const double a = uniform(rng, -1.0, 1.0);
    const double b = uniform(rng, -1.0, 1.0);
    if (std::abs(a) < 1e-3 || std::abs(b) < 1e-3) continue;
    if (a * b >= 0.25 - 1e-3) continue;
    if (std::abs(a + b) > 1.0) continue;
    const int sign = (rng() & 1) ? +1 : -1;
    return covector_from_ab(a, b, sign);
  }
}

double state_gap(const PhaseState& s, const PhaseState& r) {
  return std::max({std::abs(s.point.x - r.point.x),
                   std::abs(s.point.y - r.point.y),
                   std::abs(s.point.z - r.point.z), std::abs(s.pz - r.pz)});
}

double oracle_gap(const PhaseState& s, const oracles::Phase& ref) {
  return std::max({std::abs(s.point.x - ref[0]), std::abs(s.point.y - ref[1]),
                   std::abs(s.point.z - ref[2]), std::abs(s.pz - ref[5])});
}

}  // namespace

TEST_CASE("classification of the five families") {
  CHECK(closedform::classify(NormalizedCovector{0, 0, 1}) ==
        GeodesicCase::vertical);
  CHECK(closedform::classify(NormalizedCovector{0, 0, -1}) ==
        GeodesicCase::vertical);
  CHECK(closedform::classify(covector_from_ab(0.0, 0.6, +1)) ==
        GeodesicCase::a_zero);
  CHECK(closedform::classify(covector_from_ab(0.7, 0.0, -1)) ==
        GeodesicCase::b_zero);
  CHECK(closedform::classify(NormalizedCovector{0.5, 0.5, 0}) ==
        GeodesicCase::line);
  CHECK(closedform::classify(NormalizedCovector{-0.5, -0.5, 0}) ==
        GeodesicCase::line);
  CHECK(closedform::classify(covector_from_ab(0.3, 0.3, +1)) ==
        GeodesicCase::generic);
  CHECK(closedform::classify(covector_from_ab(-0.2, 0.6, -1)) ==
        GeodesicCase::generic);
  // The tolerance is an argument: widen it enough and near-vertical
  // covectors classify as vertical.
  const auto near_vert = covector_from_ab(1e-6, -1e-6, +1);
  CHECK(closedform::classify(near_vert) == GeodesicCase::generic);
  CHECK(closedform::classify(near_vert, 1e-5) == GeodesicCase::vertical);
  CHECK(std::string(closedform::case_name(GeodesicCase::a_zero)) == "a_zero");
}

TEST_CASE("classification rejects unnormalized covectors") {
  CHECK_THROWS_AS(closedform::classify(NormalizedCovector{0.5, 0.5, 0.5}),
                  std::domain_error);
  CHECK_THROWS_AS(closedform::classify(NormalizedCovector{
                      std::nan(""), 0.0, 1.0}),
                  std::domain_error);
}

TEST_CASE("generic parameters for the reference covector a = b = 0.3") {
  const auto p = closedform::generic_params(covector_from_ab(0.3, 0.3, +1));
  CHECK(std::abs(p.sigma1 - 3.0) <= 1e-12);
  CHECK(std::abs(p.sigma2 - 1.0 / 3.0) <= 1e-12);
  CHECK(std::abs(p.modulus.k2() - 80.0 / 81.0) <= 1e-12);
  CHECK(std::abs(p.modulus.kprime() - 1.0 / 9.0) <= 1e-12);
  CHECK(std::abs(p.omega - 0.9) <= 1e-12);
  // Frozen from the bisection oracle: t0 with sigma1 * dn(-omega * t0) = 1
  // and the descending branch selected by pz0 > 0.
  CHECK(std::abs(p.t0 - 1.9953027776647294) <= 1e-10);
  CHECK(p.v0 < 0.0);
}

TEST_CASE("sigma pair satisfies the Vieta identities") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 300; ++i) {
    const auto c = random_generic(rng);
    const auto p = closedform::generic_params(c);
    CHECK(p.sigma2 <= 1.0 + 1e-10);
    CHECK(p.sigma1 >= 1.0 - 1e-10);
    CHECK(std::abs(p.sigma1 * p.sigma2 - std::abs(c.a / c.b)) <= 1e-10);
    const double sum = (1.0 - 2.0 * c.a * c.b) / (c.b * c.b);
    CHECK(std::abs(p.sigma1 * p.sigma1 + p.sigma2 * p.sigma2 - sum) <=
          1e-10 * std::max(1.0, sum));
    CHECK(std::abs(p.modulus.kprime() - p.sigma2 / p.sigma1) <= 1e-12);
    CHECK(std::abs(p.t0 + p.v0 / p.omega) <= 1e-12);
  }
  // Spot value of the product identity.
  const auto p = closedform::generic_params(covector_from_ab(0.1, 0.2, +1));
  CHECK(std::abs(p.sigma1 * p.sigma2 - 0.5) <= 1e-12);
}

TEST_CASE("generic_params rejects non-generic covectors") {
  CHECK_THROWS_AS(closedform::generic_params(NormalizedCovector{0.5, 0.5, 0}),
                  std::domain_error);
  CHECK_THROWS_AS(closedform::generic_params(covector_from_ab(0.0, 0.6, +1)),
                  std::domain_error);
  CHECK_THROWS_AS(closedform::generic_params(NormalizedCovector{0, 0, 1}),
                  std::domain_error);
}

TEST_CASE("reference endpoints of the explicit formulas") {
  // Vertical line.
  const auto vert = closedform::eval(NormalizedCovector{0, 0, 1}, 2.0);
  CHECK(vert.point.x == 0.0);
  CHECK(vert.point.y == 0.0);
  CHECK(vert.point.z == 2.0);
  CHECK(vert.pz == 1.0);

  // Horizontal line (a = b = 1/2).
  const auto line = closedform::eval(NormalizedCovector{0.5, 0.5, 0}, 1.0);
  CHECK(std::abs(line.point.x - kInvSqrt2) <= 1e-15);
  CHECK(std::abs(line.point.y - kInvSqrt2) <= 1e-15);
  CHECK(line.point.z == 0.0);
  CHECK(line.pz == 0.0);

  // Soliton case a = 0, b = 1: x = t/sqrt(2), y = tanh(t)/sqrt(2),
  // z = ln sech t.
  const auto sol = closedform::eval(NormalizedCovector{0, 1, 0}, 1.0);
  CHECK(std::abs(sol.point.x - kInvSqrt2) <= 1e-15);
  CHECK(std::abs(sol.point.y - std::tanh(1.0) * kInvSqrt2) <= 1e-15);
  CHECK(std::abs(sol.point.z + std::log(std::cosh(1.0))) <= 1e-15);
  CHECK(std::abs(sol.pz + std::tanh(1.0)) <= 1e-15);

  // Generic reference covector against the adaptive integrator.
  const auto c = covector_from_ab(0.3, 0.3, +1);
  const auto closed = closedform::eval(c, 2.0);
  const auto ode = flow::integrate(c, 2.0, 1e-12, 2).states.back();
  CHECK(state_gap(closed, ode) <= 1e-6);
}

TEST_CASE("all branches start at the origin with the right momenta") {
  std::mt19937_64 rng(32);
  std::vector<NormalizedCovector> cases{
      NormalizedCovector{0, 0, 1},          covector_from_ab(0.0, -0.6, -1),
      covector_from_ab(0.9, 0.0, +1),       NormalizedCovector{0.5, 0.5, 0},
      covector_from_ab(0.3, 0.3, -1),       covector_from_ab(-0.45, 0.8, +1),
  };
  for (int i = 0; i < 50; ++i) cases.push_back(random_generic(rng));
  for (const auto& c : cases) {
    const Geodesic g(c);
    const auto s0 = g.eval(0.0);
    CHECK(std::abs(s0.point.x) <= 1e-10);
    CHECK(std::abs(s0.point.y) <= 1e-10);
    CHECK(std::abs(s0.point.z) <= 1e-10);
    CHECK(std::abs(s0.pz - c.pz0) <= 1e-9);
    CHECK(s0.px == c.px());
    CHECK(s0.py == c.py());
    // Initial velocity must match Hamilton's equations. The bound leaves
    // room for the h^2 truncation of the difference quotient, whose third
    // derivative grows with e^{2|z|} sigma-type constants.
    const double h = 1e-6;
    const auto sp = g.eval(h);
    const auto sm = g.eval(-h);
    const auto rhs = flow::hamiltonian_rhs(s0);
    CHECK(std::abs((sp.point.x - sm.point.x) / (2 * h) - rhs[0]) <= 1e-6);
    CHECK(std::abs((sp.point.y - sm.point.y) / (2 * h) - rhs[1]) <= 1e-6);
    CHECK(std::abs((sp.point.z - sm.point.z) / (2 * h) - rhs[2]) <= 1e-6);
  }
}

TEST_CASE("generic branch matches the Gauss collocation oracle") {
  std::mt19937_64 rng(33);
  for (int i = 0; i < 25; ++i) {
    const auto c = random_generic(rng);
    const Geodesic g(c);
    for (double t : {0.7, 2.3, 5.0}) {
      const auto ref = oracles::flow_endpoint(c.a, c.b, c.pz0, t);
      CHECK(oracle_gap(g.eval(t), ref) <= 1e-6);
    }
  }
}

TEST_CASE("closed form remains valid for negative times") {
  std::mt19937_64 rng(34);
  for (int i = 0; i < 10; ++i) {
    const auto c = random_generic(rng);
    const Geodesic g(c);
    for (double t : {-0.5, -2.0, -4.5}) {
      const auto ref = oracles::flow_endpoint(c.a, c.b, c.pz0, t);
      CHECK(oracle_gap(g.eval(t), ref) <= 1e-6);
    }
  }
  // Degenerate branches too.
  const auto sol = closedform::eval(NormalizedCovector{0, 1, 0}, -1.0);
  const auto ref = oracles::flow_endpoint(0.0, 1.0, 0.0, -1.0);
  CHECK(oracle_gap(sol, ref) <= 1e-9);
}

TEST_CASE("z is confined to [ln sigma2, ln sigma1] and attains both") {
  std::mt19937_64 rng(35);
  for (int i = 0; i < 40; ++i) {
    const auto c = random_generic(rng);
    const Geodesic g(c);
    const auto& p = *g.generic();
    const double lo = std::log(p.sigma2), hi = std::log(p.sigma1);
    const double period =
        2.0 * elliptic::complete_k(p.modulus) / std::abs(p.omega);
    for (int s = 0; s <= 64; ++s) {
      const double z = g.eval(s * period / 64.0).point.z;
      CHECK(z >= lo - 1e-8);
      CHECK(z <= hi + 1e-8);
    }
    // Turning times: v = 0 gives dn = 1 (top), v = K gives dn = k' (bottom).
    CHECK(std::abs(g.eval(p.t0).point.z - hi) <= 1e-8);
    const double t_bottom =
        p.t0 + elliptic::complete_k(p.modulus) / p.omega;
    CHECK(std::abs(g.eval(t_bottom).point.z - lo) <= 1e-8);
  }
}

TEST_CASE("z and pz are periodic with period 2K/(sigma1 |b|)") {
  std::mt19937_64 rng(36);
  for (int i = 0; i < 40; ++i) {
    const auto c = random_generic(rng);
    const Geodesic g(c);
    const auto& p = *g.generic();
    const double period =
        2.0 * elliptic::complete_k(p.modulus) / (p.sigma1 * std::abs(c.b));
    for (double t : {0.0, 0.83, 2.9}) {
      const auto s1 = g.eval(t);
      const auto s2 = g.eval(t + period);
      CHECK(std::abs(s1.point.z - s2.point.z) <= 1e-8);
      CHECK(std::abs(s1.pz - s2.pz) <= 1e-8);
    }
  }
}

TEST_CASE("momenta px, py are constant along sampled trajectories") {
  std::mt19937_64 rng(37);
  std::vector<double> times;
  for (int s = 0; s <= 40; ++s) times.push_back(0.125 * s);
  for (int i = 0; i < 10; ++i) {
    const auto c = random_generic(rng);
    const auto traj = closedform::eval_trajectory(c, times);
    REQUIRE(traj.size() == times.size());
    for (const auto& s : traj.states) {
      CHECK(s.px == c.px());
      CHECK(s.py == c.py());
    }
    for (const auto& r : traj.residuals) {
      CHECK(r.px_drift == 0.0);
      CHECK(r.py_drift == 0.0);
      CHECK(r.h_err <= 1e-9);
    }
  }
}

TEST_CASE("swap reflection carries each geodesic to its mirror") {
  std::mt19937_64 rng(38);
  std::vector<NormalizedCovector> cases{
      covector_from_ab(0.0, 0.6, +1),
      covector_from_ab(0.25, 0.55, -1),
  };
  for (int i = 0; i < 30; ++i) cases.push_back(random_generic(rng));
  for (const auto& c : cases) {
    const Geodesic g(c);
    const Geodesic gm(NormalizedCovector{c.b, c.a, -c.pz0});
    for (double t : {0.4, 1.7, 3.9}) {
      const auto s = g.eval(t);
      const auto m = gm.eval(t);
      CHECK(std::abs(s.point.x - m.point.y) <= 1e-8);
      CHECK(std::abs(s.point.y - m.point.x) <= 1e-8);
      CHECK(std::abs(s.point.z + m.point.z) <= 1e-8);
      CHECK(std::abs(s.pz + m.pz) <= 1e-8);
    }
  }
}

TEST_CASE("the soliton pair: a_zero is the exact mirror of b_zero") {
  for (double beta : {0.1, 0.5, 0.9, 1.0}) {
    for (int sign : {+1, -1}) {
      const auto ca = covector_from_ab(0.0, beta, sign);
      const auto cb = covector_from_ab(beta, 0.0, -sign);
      CHECK(Geodesic(ca).dispatch_case() == GeodesicCase::a_zero);
      CHECK(Geodesic(cb).dispatch_case() == GeodesicCase::b_zero);
      for (double t : {0.25, 1.0, 3.5, 5.0}) {
        const auto sa = closedform::eval(ca, t);
        const auto sb = closedform::eval(cb, t);
        CHECK(std::abs(sa.point.x - sb.point.y) <= 1e-14);
        CHECK(std::abs(sa.point.y - sb.point.x) <= 1e-14);
        CHECK(std::abs(sa.point.z + sb.point.z) <= 1e-14);
        CHECK(std::abs(sa.pz + sb.pz) <= 1e-14);
      }
    }
  }
}

TEST_CASE("degenerate branches agree with the oracle at moderate momenta") {
  for (double m : {0.1, 0.5, 0.9, 1.0}) {
    for (int sign : {+1, -1}) {
      for (double t : {0.5, 2.0, 5.0}) {
        const auto ca = covector_from_ab(0.0, m, sign);
        CHECK(oracle_gap(closedform::eval(ca, t),
                         oracles::flow_endpoint(0.0, m, ca.pz0, t)) <= 1e-8);
        const auto cb = covector_from_ab(m, 0.0, sign);
        CHECK(oracle_gap(closedform::eval(cb, t),
                         oracles::flow_endpoint(m, 0.0, cb.pz0, t)) <= 1e-8);
      }
    }
  }
  // Vertical and line cases are exact.
  for (double t : {0.5, 2.0, 5.0}) {
    CHECK(oracle_gap(closedform::eval(NormalizedCovector{0, 0, -1}, t),
                     oracles::flow_endpoint(0, 0, -1, t)) <= 1e-12);
    CHECK(oracle_gap(closedform::eval(NormalizedCovector{-0.5, -0.5, 0}, t),
                     oracles::flow_endpoint(-0.5, -0.5, 0, t)) <= 1e-12);
  }
}

TEST_CASE("generic evaluation converges to the degenerate formula as b -> 0") {
  // The geodesics themselves are apart by O(b * integral of e^{2z}), so the
  // comparison bound scales linearly with b; with pz0 < 0 the z excursion
  // over [0, 3] keeps the constant modest.
  const auto base = Geodesic(covector_from_ab(0.5, 0.0, -1));
  double prev_worst = 0.0;
  for (double b : {1e-4, 1e-5}) {
    const Geodesic g(covector_from_ab(0.5, b, -1));
    CHECK(g.dispatch_case() == GeodesicCase::generic);
    double worst = 0.0;
    for (int s = 0; s <= 30; ++s) {
      const double t = 0.1 * s;
      worst = std::max(worst, state_gap(g.eval(t), base.eval(t)));
    }
    if (b == 1e-4) {
      CHECK(worst <= 2e-4);
      prev_worst = worst;
    } else {
      // One decade down in b shrinks the gap by about a decade.
      CHECK(worst <= 0.2 * prev_worst);
    }
  }
}

TEST_CASE("ill-conditioned moduli dispatch to the hyperbolic branch") {
  // Both momenta clear the classification epsilon, yet k' ~ |ab| < 1e-12,
  // so the generic branch is abandoned for the hyperbolic formula zeroing
  // the smaller component. The pz signs keep z on the side where the
  // zeroed momentum never gets amplified by e^{+-2z}.
  const auto cb = covector_from_ab(2e-4, -2e-9, -1);
  const Geodesic gb(cb);
  CHECK(gb.nominal_case() == GeodesicCase::generic);
  CHECK(gb.dispatch_case() == GeodesicCase::b_zero);
  CHECK(!gb.generic().has_value());
  for (double t : {1.0, 3.0}) {
    CHECK(oracle_gap(gb.eval(t),
                     oracles::flow_endpoint(cb.a, cb.b, cb.pz0, t)) <= 1e-6);
  }

  const auto ca = covector_from_ab(-2e-9, 2e-4, +1);
  const Geodesic ga(ca);
  CHECK(ga.nominal_case() == GeodesicCase::generic);
  CHECK(ga.dispatch_case() == GeodesicCase::a_zero);
  CHECK(oracle_gap(ga.eval(2.0),
                   oracles::flow_endpoint(ca.a, ca.b, ca.pz0, 2.0)) <= 1e-6);

  // Just above the threshold the generic branch must hold its own.
  const auto cg = covector_from_ab(0.5, -1e-5, +1);
  const Geodesic gg(cg);
  CHECK(gg.dispatch_case() == GeodesicCase::generic);
  CHECK(oracle_gap(gg.eval(3.0),
                   oracles::flow_endpoint(cg.a, cg.b, cg.pz0, 3.0)) <= 1e-6);
}

TEST_CASE("metadata records the evaluated branch") {
  const auto j = nlohmann::json::parse(
      Geodesic(covector_from_ab(0.3, 0.3, +1)).metadata_json());
  CHECK(j["case"] == "generic");
  CHECK(std::abs(j["a"].get<double>() - 0.3) <= 1e-15);
  CHECK(std::abs(j["sigma1"].get<double>() - 3.0) <= 1e-12);
  CHECK(std::abs(j["sigma2"].get<double>() - 1.0 / 3.0) <= 1e-12);
  CHECK(std::abs(j["k"].get<double>() - std::sqrt(80.0) / 9.0) <= 1e-12);
  CHECK(std::abs(j["t0"].get<double>() - 1.9953027776647294) <= 1e-10);

  const auto jv =
      nlohmann::json::parse(Geodesic(NormalizedCovector{0, 0, 1}).metadata_json());
  CHECK(jv["case"] == "vertical");
  CHECK(jv["sigma1"].is_null());
  CHECK(jv["k"].is_null());
  CHECK(jv["t0"].is_null());

  // Fallback dispatch is what metadata reports.
  const auto jf = nlohmann::json::parse(
      Geodesic(covector_from_ab(0.5, -1e-13, +1)).metadata_json());
  CHECK(jf["case"] == "b_zero");
  CHECK(jf["sigma1"].is_null());
}

TEST_CASE("eval_trajectory on the vertical geodesic") {
  const std::vector<double> times{0.0, 1.0, 2.0};
  const auto traj =
      closedform::eval_trajectory(NormalizedCovector{0, 0, 1}, times);
  REQUIRE(traj.size() == 3);
  CHECK(traj.states[0].point.z == 0.0);
  CHECK(traj.states[1].point.z == 1.0);
  CHECK(traj.states[2].point.z == 2.0);
  CHECK(traj.states[2].point.x == 0.0);
  CHECK(traj.states[2].point.y == 0.0);
}

TEST_CASE("invalid inputs are rejected") {
  CHECK_THROWS_AS(Geodesic(NormalizedCovector{0.5, 0.5, 0.5}),
                  std::domain_error);
  CHECK_THROWS_AS(Geodesic(NormalizedCovector{0.1, std::nan(""), 0.5}),
                  std::domain_error);
  const Geodesic g(covector_from_ab(0.3, 0.3, +1));
  CHECK_THROWS_AS(g.eval(std::numeric_limits<double>::infinity()),
                  std::domain_error);
}
