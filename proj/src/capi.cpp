#include "solvgeo/solvgeo.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <string>
#include <utility>

#include "closedform.hpp"
#include "elliptic.hpp"
#include "flow.hpp"
#include "model.hpp"
#include "sphere.hpp"
#include "trajectory.hpp"
#include "verify.hpp"

struct solvgeo_geodesic {
  solvgeo::closedform::Geodesic impl;
};

struct solvgeo_trajectory {
  solvgeo::Trajectory impl;
};

struct solvgeo_sphere {
  solvgeo::sphere::SphereGrid impl;
};

static_assert(static_cast<int>(solvgeo::closedform::GeodesicCase::generic) ==
              SOLVGEO_CASE_GENERIC);
static_assert(static_cast<int>(solvgeo::closedform::GeodesicCase::vertical) ==
              SOLVGEO_CASE_VERTICAL);
static_assert(static_cast<int>(solvgeo::closedform::GeodesicCase::a_zero) ==
              SOLVGEO_CASE_A_ZERO);
static_assert(static_cast<int>(solvgeo::closedform::GeodesicCase::b_zero) ==
              SOLVGEO_CASE_B_ZERO);
static_assert(static_cast<int>(solvgeo::closedform::GeodesicCase::line) ==
              SOLVGEO_CASE_LINE);

namespace {

thread_local std::string g_last_error;

solvgeo_status fail(solvgeo_status st, const std::string& msg) {
  g_last_error = msg;
  return st;
}

template <class F>
solvgeo_status wrap(F&& f) {
  try {
    g_last_error.clear();
    return std::forward<F>(f)();
  } catch (const solvgeo::flow::IntegrationError& e) {
    return fail(SOLVGEO_ERR_INTEGRATION, e.what());
  } catch (const std::domain_error& e) {
    return fail(SOLVGEO_ERR_DOMAIN, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(SOLVGEO_ERR_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(SOLVGEO_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SOLVGEO_ERR_INTERNAL, e.what());
  }
}

solvgeo_status require(bool ok, const char* msg) {
  return ok ? SOLVGEO_OK : fail(SOLVGEO_ERR_ARGUMENT, msg);
}

solvgeo::NormalizedCovector to_cov(const solvgeo_covector& c) {
  return solvgeo::NormalizedCovector{c.a, c.b, c.pz0};
}

solvgeo_covector from_cov(const solvgeo::NormalizedCovector& c) {
  return solvgeo_covector{c.a, c.b, c.pz0};
}

solvgeo_state from_state(const solvgeo::PhaseState& s) {
  return solvgeo_state{s.point.x, s.point.y, s.point.z, s.px, s.py, s.pz};
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <class Writer>
solvgeo_status write_file(const char* path, Writer&& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    return fail(SOLVGEO_ERR_IO, std::string("cannot open '") + path +
                                    "' for writing");
  }
  writer(out);
  out.flush();
  if (!out) {
    return fail(SOLVGEO_ERR_IO, std::string("write to '") + path + "' failed");
  }
  return SOLVGEO_OK;
}

}  // namespace

extern "C" {

const char* solvgeo_last_error(void) { return g_last_error.c_str(); }

const char* solvgeo_version(void) { return "1.0.0"; }

solvgeo_status solvgeo_covector_normalize(double px, double py, double pz,
                                          solvgeo_covector* out) {
  if (auto st = require(out != nullptr, "out covector is NULL")) return st;
  return wrap([&] {
    *out = from_cov(solvgeo::normalize_covector(px, py, pz));
    return SOLVGEO_OK;
  });
}

solvgeo_status solvgeo_covector_from_ab(double a, double b, int pz_sign,
                                        solvgeo_covector* out) {
  if (auto st = require(out != nullptr, "out covector is NULL")) return st;
  return wrap([&] {
    *out = from_cov(solvgeo::covector_from_ab(a, b, pz_sign));
    return SOLVGEO_OK;
  });
}

solvgeo_status solvgeo_covector_from_grid(double theta, double mu,
                                          solvgeo_covector* out) {
  if (auto st = require(out != nullptr, "out covector is NULL")) return st;
  return wrap([&] {
    *out = from_cov(solvgeo::sphere::covector_from_grid(theta, mu));
    return SOLVGEO_OK;
  });
}

solvgeo_status solvgeo_geodesic_create(const solvgeo_covector* c,
                                       solvgeo_geodesic** out) {
  if (auto st = require(c != nullptr && out != nullptr,
                        "covector/out handle is NULL"))
    return st;
  return wrap([&] {
    *out = new solvgeo_geodesic{solvgeo::closedform::Geodesic(to_cov(*c))};
    return SOLVGEO_OK;
  });
}

void solvgeo_geodesic_destroy(solvgeo_geodesic* g) { delete g; }

solvgeo_status solvgeo_geodesic_case(const solvgeo_geodesic* g,
                                     solvgeo_case* out) {
  if (auto st = require(g != nullptr && out != nullptr,
                        "geodesic/out handle is NULL"))
    return st;
  *out = static_cast<solvgeo_case>(g->impl.dispatch_case());
  return SOLVGEO_OK;
}

solvgeo_status solvgeo_geodesic_eval(const solvgeo_geodesic* g, double t,
                                     solvgeo_state* out) {
  if (auto st = require(g != nullptr && out != nullptr,
                        "geodesic/out handle is NULL"))
    return st;
  return wrap([&] {
    *out = from_state(g->impl.eval(t));
    return SOLVGEO_OK;
  });
}

solvgeo_status solvgeo_geodesic_sample(const solvgeo_geodesic* g,
                                       const double* times, size_t n,
                                       solvgeo_trajectory** out) {
  if (auto st = require(g != nullptr && out != nullptr && (times || n == 0),
                        "geodesic/times/out is NULL"))
    return st;
  return wrap([&] {
    *out = new solvgeo_trajectory{g->impl.sample({times, n})};
    return SOLVGEO_OK;
  });
}

solvgeo_status solvgeo_geodesic_metadata_json(const solvgeo_geodesic* g,
                                              char** out) {
  if (auto st = require(g != nullptr && out != nullptr,
                        "geodesic/out handle is NULL"))
    return st;
  return wrap([&] {
    *out = dup_string(g->impl.metadata_json());
    return SOLVGEO_OK;
  });
}

solvgeo_status solvgeo_flow_integrate(const solvgeo_covector* c,
                                      const double* times, size_t n,
                                      double tol, solvgeo_trajectory** out) {
  if (auto st = require(c != nullptr && out != nullptr && (times || n == 0),
                        "covector/times/out is NULL"))
    return st;
  return wrap([&] {
    *out = new solvgeo_trajectory{
        solvgeo::flow::integrate(to_cov(*c), {times, n}, tol)};
    return SOLVGEO_OK;
  });
}

size_t solvgeo_trajectory_size(const solvgeo_trajectory* tr) {
  return tr == nullptr ? 0 : tr->impl.size();
}

solvgeo_status solvgeo_trajectory_get(const solvgeo_trajectory* tr, size_t i,
                                      double* t, solvgeo_state* s) {
  if (auto st = require(tr != nullptr, "trajectory handle is NULL")) return st;
  if (i >= tr->impl.size()) {
    return fail(SOLVGEO_ERR_ARGUMENT, "sample index out of range");
  }
  if (t != nullptr) *t = tr->impl.times[i];
  if (s != nullptr) *s = from_state(tr->impl.states[i]);
  return SOLVGEO_OK;
}

solvgeo_status solvgeo_trajectory_drift(const solvgeo_trajectory* tr,
                                        double* h, double* px, double* py,
                                        double* speed, double* admissibility) {
  if (auto st = require(tr != nullptr, "trajectory handle is NULL")) return st;
  solvgeo::DriftReport d = solvgeo::invariant_drift(tr->impl);
  if (h != nullptr) *h = d.h;
  if (px != nullptr) *px = d.px;
  if (py != nullptr) *py = d.py;
  if (speed != nullptr) *speed = d.speed;
  if (admissibility != nullptr) *admissibility = d.admissibility;
  return SOLVGEO_OK;
}

solvgeo_status solvgeo_trajectory_write_csv(const solvgeo_trajectory* tr,
                                            const char* path) {
  if (auto st = require(tr != nullptr && path != nullptr,
                        "trajectory/path is NULL"))
    return st;
  return write_file(path, [&](std::ostream& out) {
    solvgeo::write_trajectory_csv(tr->impl, out);
  });
}

void solvgeo_trajectory_destroy(solvgeo_trajectory* tr) { delete tr; }

solvgeo_status solvgeo_hamiltonian(const solvgeo_state* s, double* out) {
  if (auto st = require(s != nullptr && out != nullptr, "state/out is NULL"))
    return st;
  *out = solvgeo::hamiltonian(solvgeo::PhaseState{
      solvgeo::GroupPoint{s->x, s->y, s->z}, s->px, s->py, s->pz});
  return SOLVGEO_OK;
}

void solvgeo_sphere_spec_defaults(solvgeo_sphere_spec* spec) {
  if (spec == nullptr) return;
  solvgeo::sphere::GridSpec d;
  *spec = solvgeo_sphere_spec{d.radius, d.theta_min, d.theta_max,
                              d.mu_min, d.mu_max,    d.n_theta,
                              d.n_mu};
}

solvgeo_status solvgeo_sphere_sample(const solvgeo_sphere_spec* spec,
                                     solvgeo_sphere** out) {
  if (auto st = require(spec != nullptr && out != nullptr,
                        "spec/out handle is NULL"))
    return st;
  return wrap([&] {
    solvgeo::sphere::GridSpec s;
    s.radius = spec->radius;
    s.theta_min = spec->theta_min;
    s.theta_max = spec->theta_max;
    s.mu_min = spec->mu_min;
    s.mu_max = spec->mu_max;
    s.n_theta = spec->n_theta;
    s.n_mu = spec->n_mu;
    *out = new solvgeo_sphere{solvgeo::sphere::sample_sphere(s)};
    return SOLVGEO_OK;
  });
}

solvgeo_status solvgeo_sphere_stats(const solvgeo_sphere* sp,
                                    size_t* closed_form, size_t* ode_fallback,
                                    size_t* failed) {
  if (auto st = require(sp != nullptr, "sphere handle is NULL")) return st;
  size_t a = 0, b = 0, c = 0;
  for (const auto& pt : sp->impl.points) {
    switch (pt.method) {
      case solvgeo::sphere::SampleMethod::closed_form:
        ++a;
        break;
      case solvgeo::sphere::SampleMethod::ode_fallback:
        ++b;
        break;
      case solvgeo::sphere::SampleMethod::failed:
        ++c;
        break;
    }
  }
  if (closed_form != nullptr) *closed_form = a;
  if (ode_fallback != nullptr) *ode_fallback = b;
  if (failed != nullptr) *failed = c;
  return SOLVGEO_OK;
}

solvgeo_status solvgeo_sphere_point(const solvgeo_sphere* sp, int i, int j,
                                    double* theta, double* mu, double* x,
                                    double* y, double* z, int* method) {
  if (auto st = require(sp != nullptr, "sphere handle is NULL")) return st;
  if (i < 0 || i >= sp->impl.spec.n_theta || j < 0 ||
      j >= sp->impl.spec.n_mu) {
    return fail(SOLVGEO_ERR_ARGUMENT, "grid index out of range");
  }
  const solvgeo::sphere::SpherePoint& pt = sp->impl.at(i, j);
  if (theta != nullptr) *theta = pt.theta;
  if (mu != nullptr) *mu = pt.mu;
  if (x != nullptr) *x = pt.endpoint.x;
  if (y != nullptr) *y = pt.endpoint.y;
  if (z != nullptr) *z = pt.endpoint.z;
  if (method != nullptr) *method = static_cast<int>(pt.method);
  return SOLVGEO_OK;
}

solvgeo_status solvgeo_sphere_write_csv(const solvgeo_sphere* sp,
                                        const char* path, int exp_z) {
  if (auto st = require(sp != nullptr && path != nullptr,
                        "sphere/path is NULL"))
    return st;
  return write_file(path, [&](std::ostream& out) {
    solvgeo::sphere::write_csv(sp->impl, out, exp_z != 0);
  });
}

solvgeo_status solvgeo_sphere_write_obj(const solvgeo_sphere* sp,
                                        const char* path, int exp_z) {
  if (auto st = require(sp != nullptr && path != nullptr,
                        "sphere/path is NULL"))
    return st;
  return write_file(path, [&](std::ostream& out) {
    solvgeo::sphere::write_obj(sp->impl, out, exp_z != 0);
  });
}

void solvgeo_sphere_destroy(solvgeo_sphere* sp) { delete sp; }

solvgeo_status solvgeo_verify(const char* suite, uint64_t seed, int n,
                              char** report_json) {
  if (auto st = require(suite != nullptr, "suite name is NULL")) return st;
  return wrap([&]() -> solvgeo_status {
    solvgeo::verify::Report rep = solvgeo::verify::run(suite, seed, n);
    if (report_json != nullptr) *report_json = dup_string(rep.to_json());
    if (!rep.pass) {
      return fail(SOLVGEO_ERR_VERIFICATION,
                  "verification suite '" + rep.suite +
                      "' exceeded at least one tolerance");
    }
    return SOLVGEO_OK;
  });
}

solvgeo_status solvgeo_elliptic_eval(const char* fn, double u, double k,
                                     double* out) {
  if (auto st = require(fn != nullptr && out != nullptr, "fn/out is NULL"))
    return st;
  return wrap([&]() -> solvgeo_status {
    auto m = solvgeo::elliptic::EllipticModulus::from_k(k);
    std::string name(fn);
    if (name == "sn" || name == "cn" || name == "dn" || name == "am") {
      solvgeo::elliptic::JacobiTriple t = solvgeo::elliptic::jacobi(u, m);
      *out = name == "sn"   ? t.sn
             : name == "cn" ? t.cn
             : name == "dn" ? t.dn
                            : t.am;
      return SOLVGEO_OK;
    }
    if (name == "F") {
      *out = solvgeo::elliptic::incomplete_f(u, m);
      return SOLVGEO_OK;
    }
    if (name == "E") {
      *out = solvgeo::elliptic::incomplete_e(u, m);
      return SOLVGEO_OK;
    }
    return fail(SOLVGEO_ERR_ARGUMENT,
                "unknown elliptic function '" + name +
                    "'; expected sn, cn, dn, am, F or E");
  });
}

void solvgeo_string_free(char* s) { std::free(s); }

}  // extern "C"
