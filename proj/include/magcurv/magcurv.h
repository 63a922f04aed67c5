#ifndef MAGCURV_MAGCURV_H
#define MAGCURV_MAGCURV_H

#include <stddef.h>
#include <stdint.h>

#if defined(MAGCURV_BUILDING_LIBRARY)
#define MAGCURV_API __attribute__((visibility("default")))
#else
#define MAGCURV_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Every failing call stores a message retrievable with
   mc_last_error() on the calling thread. */
typedef enum mc_status {
  MC_OK = 0,
  MC_ERR_INVALID_ARGUMENT = 1,
  MC_ERR_DEGENERATE = 2,
  MC_ERR_DOMAIN = 3,
  MC_ERR_NOT_CONVERGED = 4,
  MC_ERR_PARSE = 5,
  MC_ERR_IO = 6,
  MC_ERR_INTERNAL = 7,
  MC_ERR_BUFFER_TOO_SMALL = 8
} mc_status;

typedef struct mc_system mc_system;
typedef struct mc_orbit mc_orbit;
typedef struct mc_record mc_record;

MAGCURV_API const char* mc_version(void);
MAGCURV_API int mc_schema_version(void);
/* Message of the last failure on this thread; "" when none. */
MAGCURV_API const char* mc_last_error(void);

/* Systems. Builtin names: flat_torus, round_sphere, hyperbolic_chart. */
MAGCURV_API mc_status mc_system_create_builtin(const char* name, double b, double modulation, mc_system** out);
/* Expression system: metric has n*n or n(n+1)/2 entries, two_form n*n or
   n(n-1)/2, primitive 0 or n, lattice 0 or n periods (0 = non-periodic).
   analytic != 0 selects symbolic derivatives, otherwise central differences
   with fd_step. k binds the parameter k inside the expressions. */
MAGCURV_API mc_status mc_system_create_expr(int dimension, const char* const* metric, size_t metric_count,
                                            const char* const* two_form, size_t two_form_count,
                                            const char* const* primitive, size_t primitive_count,
                                            const double* lattice, size_t lattice_count, int analytic,
                                            double fd_step, double k, mc_system** out);
MAGCURV_API void mc_system_destroy(mc_system* sys);
MAGCURV_API int mc_system_dimension(const mc_system* sys);

/* Tensor calculus at a chart point x (length n arrays). */
MAGCURV_API mc_status mc_christoffel(const mc_system* sys, const double* x, double* gamma /* n^3: [k][i][j] */);
MAGCURV_API mc_status mc_riemann(const mc_system* sys, const double* x, const double* u, const double* v,
                                 const double* w, double* out);
MAGCURV_API mc_status mc_lorentz(const mc_system* sys, const double* x, const double* w, double* out);
MAGCURV_API mc_status mc_nabla_omega(const mc_system* sys, const double* x, const double* w, const double* v,
                                     double* out);

/* Magnetic curvature. v must be unit; for sec, w unit and orthogonal to v. */
MAGCURV_API mc_status mc_sec_omega_k(const mc_system* sys, const double* x, const double* v, const double* w,
                                     double k, double* out);
MAGCURV_API mc_status mc_ric_omega_k(const mc_system* sys, const double* x, const double* v, double k, double* out);
MAGCURV_API mc_status mc_trace_a_omega(const mc_system* sys, const double* x, const double* v, double* out);
/* Surface formula 2kK - sqrt(2k) db(Jv) + b^2 on oriented 2-dimensional systems. */
MAGCURV_API mc_status mc_surface_sec_b(const mc_system* sys, const double* x, const double* v, double k, double* out);

/* Magnetic geodesic on [0, t_end], sampled at `samples` + 1 times. */
MAGCURV_API mc_status mc_integrate(const mc_system* sys, const double* x0, const double* v0, double t_end,
                                   double tolerance, int samples, mc_orbit** out);
MAGCURV_API size_t mc_orbit_size(const mc_orbit* orbit);
MAGCURV_API mc_status mc_orbit_sample(const mc_orbit* orbit, size_t i, double* t, double* x, double* v);
MAGCURV_API double mc_orbit_energy_drift(const mc_orbit* orbit);
MAGCURV_API void mc_orbit_destroy(mc_orbit* orbit);

/* Closed orbit by shooting from (x0, v0) with period guess T, then index and
   certification. A search that does not converge still returns a record,
   with mc_record_found() == 0. */
MAGCURV_API mc_status mc_find_orbit(const mc_system* sys, double k, const double* x0, const double* v0, double T,
                                    int nodes, int modes, mc_record** out);
MAGCURV_API int mc_record_found(const mc_record* rec);
MAGCURV_API int mc_record_certified(const mc_record* rec);   /* all checks pass */
MAGCURV_API double mc_record_period(const mc_record* rec);
MAGCURV_API int mc_record_index(const mc_record* rec);       /* -1 without an index */
/* JSON text of the record. Writes at most `capacity` bytes including the
   terminator; *needed receives the full size. */
MAGCURV_API mc_status mc_record_json(const mc_record* rec, char* buffer, size_t capacity, size_t* needed);
MAGCURV_API void mc_record_destroy(mc_record* rec);

/* Runs a config file as the command-line tool does. out_dir and format may
   be NULL; seed is applied when has_seed != 0. A one-line JSON summary goes
   to stdout. With echo != 0 the error document (and progress lines when
   verbose != 0) are also written to stderr. *exit_code receives the tool
   exit status (0 ok, 1 certification failed, 2 schema, 3 runtime); the
   error document of a failed run is available from mc_last_error(). */
MAGCURV_API mc_status mc_run_config(const char* path, const char* out_dir, const char* format, int has_seed,
                                    uint64_t seed, int verbose, int echo, int* exit_code);

#ifdef __cplusplus
}
#endif

#endif
