/* solvgeo - closed-form sub-Riemannian geodesics on the solvable group SOLV,
 * verified against numerical integration of the Hamiltonian flow.
 *
 * C interface of the shared library. All functions returning solvgeo_status
 * set a thread-local message retrievable with solvgeo_last_error() on
 * failure. Handles are created/destroyed strictly through this interface.
 */
#ifndef SOLVGEO_H
#define SOLVGEO_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SOLVGEO_API __declspec(dllexport)
#else
#define SOLVGEO_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum solvgeo_status {
  SOLVGEO_OK = 0,
  SOLVGEO_ERR_DOMAIN = 1,       /* mathematical precondition violated */
  SOLVGEO_ERR_ARGUMENT = 2,     /* null pointer, bad size, unknown name */
  SOLVGEO_ERR_INTEGRATION = 3,  /* integrator step collapse or budget */
  SOLVGEO_ERR_VERIFICATION = 4, /* a verify suite exceeded a tolerance */
  SOLVGEO_ERR_IO = 5,           /* output file could not be written */
  SOLVGEO_ERR_INTERNAL = 6
} solvgeo_status;

/* Classification of a geodesic by its initial covector (a = px/sqrt(2),
 * b = py/sqrt(2)): generic elliptic case, or one of the degenerate
 * families. */
typedef enum solvgeo_case {
  SOLVGEO_CASE_GENERIC = 0,
  SOLVGEO_CASE_VERTICAL = 1, /* a = b = 0 */
  SOLVGEO_CASE_A_ZERO = 2,   /* a = 0, b != 0 */
  SOLVGEO_CASE_B_ZERO = 3,   /* b = 0, a != 0 */
  SOLVGEO_CASE_LINE = 4      /* ab = 1/4 */
} solvgeo_case;

/* Initial covector at the identity on the unit-speed level H = 1/2;
 * admissible data satisfy (a + b)^2 + pz0^2 = 1. */
typedef struct solvgeo_covector {
  double a;
  double b;
  double pz0;
} solvgeo_covector;

/* Phase-space sample: position and momentum. */
typedef struct solvgeo_state {
  double x, y, z;
  double px, py, pz;
} solvgeo_state;

/* Sphere grid specification; see solvgeo_sphere_spec_defaults. */
typedef struct solvgeo_sphere_spec {
  double radius;
  double theta_min, theta_max;
  double mu_min, mu_max;
  int n_theta, n_mu;
} solvgeo_sphere_spec;

typedef struct solvgeo_geodesic solvgeo_geodesic;
typedef struct solvgeo_trajectory solvgeo_trajectory;
typedef struct solvgeo_sphere solvgeo_sphere;

/* Message describing the most recent failure on the calling thread.
 * Never NULL; empty string when no failure has been recorded. */
SOLVGEO_API const char* solvgeo_last_error(void);

SOLVGEO_API const char* solvgeo_version(void);

/* --- covector construction ------------------------------------------- */

/* Rescale an arbitrary covector (px, py, pz) onto H = 1/2. Fails with
 * SOLVGEO_ERR_DOMAIN for annihilators of the distribution (px + py = 0,
 * pz = 0). */
SOLVGEO_API solvgeo_status solvgeo_covector_normalize(double px, double py,
                                                      double pz,
                                                      solvgeo_covector* out);

/* Build an admissible covector from (a, b); |pz0| is determined by the
 * unit-speed constraint and carries the sign of pz_sign (>= 0 is +).
 * Requires (a + b)^2 <= 1. */
SOLVGEO_API solvgeo_status solvgeo_covector_from_ab(double a, double b,
                                                    int pz_sign,
                                                    solvgeo_covector* out);

/* Covector of the sphere chart: a + b = cos(theta), pz0 = sin(theta),
 * b - a = mu / (sqrt(2) sin(theta)). mu != 0 at sin(theta) = 0 is a
 * domain error. */
SOLVGEO_API solvgeo_status solvgeo_covector_from_grid(double theta, double mu,
                                                      solvgeo_covector* out);

/* --- closed-form geodesics ------------------------------------------- */

SOLVGEO_API solvgeo_status solvgeo_geodesic_create(const solvgeo_covector* c,
                                                   solvgeo_geodesic** out);
SOLVGEO_API void solvgeo_geodesic_destroy(solvgeo_geodesic* g);

/* Branch used for evaluation. */
SOLVGEO_API solvgeo_status solvgeo_geodesic_case(const solvgeo_geodesic* g,
                                                 solvgeo_case* out);

SOLVGEO_API solvgeo_status solvgeo_geodesic_eval(const solvgeo_geodesic* g,
                                                 double t, solvgeo_state* out);

/* Sample at the given times (finite; any order). */
SOLVGEO_API solvgeo_status solvgeo_geodesic_sample(const solvgeo_geodesic* g,
                                                   const double* times,
                                                   size_t n,
                                                   solvgeo_trajectory** out);

/* One-line JSON {a, b, pz0, case, sigma1, sigma2, k, t0}; the last four are
 * null for non-generic cases. Free with solvgeo_string_free. */
SOLVGEO_API solvgeo_status solvgeo_geodesic_metadata_json(
    const solvgeo_geodesic* g, char** out);

/* --- numerical flow (independent oracle) ------------------------------ */

/* Integrate Hamilton's equations from the identity with dense output at
 * the given times (nonnegative, nondecreasing). tol is the absolute and
 * relative tolerance of the embedded Dormand-Prince 5(4) pair. */
SOLVGEO_API solvgeo_status solvgeo_flow_integrate(const solvgeo_covector* c,
                                                  const double* times,
                                                  size_t n, double tol,
                                                  solvgeo_trajectory** out);

/* --- trajectories ------------------------------------------------------ */

SOLVGEO_API size_t solvgeo_trajectory_size(const solvgeo_trajectory* tr);
SOLVGEO_API solvgeo_status solvgeo_trajectory_get(const solvgeo_trajectory* tr,
                                                  size_t i, double* t,
                                                  solvgeo_state* s);

/* Worst-case residuals over all samples: |H - 1/2|, px/py drift, |speed - 1|
 * and the admissibility defect |dy - e^{2z} dx|. Any output may be NULL. */
SOLVGEO_API solvgeo_status solvgeo_trajectory_drift(
    const solvgeo_trajectory* tr, double* h, double* px, double* py,
    double* speed, double* admissibility);

/* CSV with header t,x,y,z,px,py,pz,H,speed_err,adm_err (17 significant
 * digits, '\n' endings). */
SOLVGEO_API solvgeo_status solvgeo_trajectory_write_csv(
    const solvgeo_trajectory* tr, const char* path);

SOLVGEO_API void solvgeo_trajectory_destroy(solvgeo_trajectory* tr);

/* --- model helpers ----------------------------------------------------- */

/* Normal Hamiltonian H(state). */
SOLVGEO_API solvgeo_status solvgeo_hamiltonian(const solvgeo_state* s,
                                               double* out);

/* --- geodesic spheres --------------------------------------------------- */

/* radius 0.25, theta in [pi/6, 5pi/6], mu in [-45, 45], 32x32 grid. */
SOLVGEO_API void solvgeo_sphere_spec_defaults(solvgeo_sphere_spec* spec);

/* Sample the sphere; per-node failures are recorded in the grid, not
 * returned as errors. Honors SOL_GEODESICS_THREADS (0/unset = all cores). */
SOLVGEO_API solvgeo_status solvgeo_sphere_sample(const solvgeo_sphere_spec* spec,
                                                 solvgeo_sphere** out);

/* Node counts by evaluation method. Any output may be NULL. */
SOLVGEO_API solvgeo_status solvgeo_sphere_stats(const solvgeo_sphere* sp,
                                                size_t* closed_form,
                                                size_t* ode_fallback,
                                                size_t* failed);

/* Node (i, j) of the theta-major grid. method: 0 closed form, 1 ODE
 * fallback, 2 failed (coordinates NaN). Outputs may be NULL. */
SOLVGEO_API solvgeo_status solvgeo_sphere_point(const solvgeo_sphere* sp, int i,
                                                int j, double* theta,
                                                double* mu, double* x,
                                                double* y, double* z,
                                                int* method);

/* CSV header theta,mu,x,y,z; exp_z != 0 replaces z by e^z. */
SOLVGEO_API solvgeo_status solvgeo_sphere_write_csv(const solvgeo_sphere* sp,
                                                    const char* path,
                                                    int exp_z);

/* Wavefront OBJ quad mesh over the grid. */
SOLVGEO_API solvgeo_status solvgeo_sphere_write_obj(const solvgeo_sphere* sp,
                                                    const char* path,
                                                    int exp_z);

SOLVGEO_API void solvgeo_sphere_destroy(solvgeo_sphere* sp);

/* --- verification ------------------------------------------------------- */

/* Run a verification suite ("elliptic", "conservation", "oracle",
 * "symmetry", "all"); n = 0 selects the suite default. The JSON report is
 * always produced on success or tolerance failure; tolerance violations
 * return SOLVGEO_ERR_VERIFICATION. Free the report with
 * solvgeo_string_free. */
SOLVGEO_API solvgeo_status solvgeo_verify(const char* suite, uint64_t seed,
                                          int n, char** report_json);

/* --- elliptic kernel (exposed for testing/CLI) -------------------------- */

/* Evaluate fn in {"sn","cn","dn","am"} at (u, k), or {"F","E"} at
 * (phi = u, k). Requires 0 <= k < 1. */
SOLVGEO_API solvgeo_status solvgeo_elliptic_eval(const char* fn, double u,
                                                 double k, double* out);

SOLVGEO_API void solvgeo_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* SOLVGEO_H */
