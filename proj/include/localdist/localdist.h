/* C interface to the local-distance solver.
 *
 * All objects are opaque handles owned by the caller and released with the
 * matching _free function. Functions return an ld_status; on failure the
 * message is available from ld_last_error() (per thread, valid until the
 * next failing call on that thread). Strings returned through char** are
 * heap allocated and released with ld_string_free.
 *
 * Behavior tables passed as flat arrays use the JSON order: r-major, then
 * s, then a, then b. Outcome index 0 is the +1 outcome.
 */
#ifndef LOCALDIST_H
#define LOCALDIST_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define LD_API __declspec(dllexport)
#else
#  define LD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  LD_OK = 0,
  LD_INVALID_ARGUMENT = 1,
  LD_VALIDATION = 2,
  LD_NOT_CONVERGED = 3,
  LD_CAP_EXCEEDED = 4,
  LD_PARSE = 5,
  LD_DIMENSION_MISMATCH = 6,
  LD_INTERNAL = 7
} ld_status;

typedef enum { LD_PLANE_XY = 0, LD_PLANE_XZ = 1 } ld_plane;
typedef enum { LD_STATE_PURE = 0, LD_STATE_WERNER = 1 } ld_state_kind;
typedef enum {
  LD_ORACLE_HEURISTIC = 0,
  LD_ORACLE_EXACT = 1,
  LD_ORACLE_CERTIFY = 2 /* heuristic, brute force at the end */
} ld_oracle_mode;

typedef struct ld_behavior ld_behavior;
typedef struct ld_report ld_report;

LD_API const char* ld_version(void);
LD_API const char* ld_last_error(void);
LD_API const char* ld_status_name(ld_status s);
LD_API void ld_string_free(char* s);

/* Behaviors */
LD_API ld_status ld_behavior_from_json(const char* json, ld_behavior** out);
LD_API ld_status ld_behavior_from_table(int A, int B, int R, int S,
                                        const double* table, ld_behavior** out);
LD_API ld_status ld_behavior_pr_box(ld_behavior** out);
LD_API ld_status ld_behavior_uniform(int A, int B, int R, int S, ld_behavior** out);
LD_API ld_status ld_behavior_local_mixture(int A, int B, int R, int S, int k,
                                           uint64_t seed, ld_behavior** out);
/* r has A entries in [0,R), s has B entries in [0,S). */
LD_API ld_status ld_behavior_vertex(int A, int B, int R, int S, const int* r,
                                    const int* s, ld_behavior** out);
/* param is gamma for LD_STATE_PURE and the visibility p for LD_STATE_WERNER. */
LD_API ld_status ld_behavior_qubit(ld_state_kind kind, double param,
                                   ld_plane alice_plane, const double* alice_angles,
                                   int A, ld_plane bob_plane,
                                   const double* bob_angles, int B,
                                   ld_behavior** out);
LD_API void ld_behavior_free(ld_behavior* P);

LD_API ld_status ld_behavior_dims(const ld_behavior* P, int* A, int* B, int* R,
                                  int* S);
LD_API ld_status ld_behavior_get(const ld_behavior* P, int r, int s, int a, int b,
                                 double* out);
/* ok is set to 1 when all three checks pass at tolerance tol. Any of the
 * worst_* pointers may be NULL. */
LD_API ld_status ld_behavior_validate(const ld_behavior* P, double tol, int* ok,
                                      double* worst_normalization,
                                      double* worst_negativity,
                                      double* worst_signaling);
LD_API ld_status ld_behavior_to_json(const ld_behavior* P, char** out);

/* theta_k = k pi / M + offset written to out[0..M-1] */
LD_API ld_status ld_planar_angles(int M, double offset, double* out);
/* pi / (2M), Bob's offset in the chained configuration */
LD_API double ld_chained_offset(int M);

/* Solver */
typedef struct {
  double epsilon;
  double gamma;
  ld_oracle_mode oracle_mode;
  int oracle_trials; /* 0: d_NS */
  int sweep_limit;
  int oracle_threads;
  uint64_t seed;
  uint64_t enumeration_cap;
  int max_outer_iterations;
  int max_inner_iterations;
  double inner_tolerance;
  double validation_tolerance;
  int strict_cleanup; /* nonzero: also drop certified zero-weight vertices */
} ld_solve_options;

LD_API void ld_solve_options_init(ld_solve_options* opts);

/* On LD_NOT_CONVERGED the report is still returned in *out. */
LD_API ld_status ld_compute_distance(const ld_behavior* P,
                                     const ld_solve_options* opts, ld_report** out);
LD_API void ld_report_free(ld_report* rep);

LD_API double ld_report_distance(const ld_report* rep);
LD_API double ld_report_f_plus(const ld_report* rep);
LD_API double ld_report_f_minus(const ld_report* rep);
LD_API double ld_report_gap(const ld_report* rep);
LD_API int ld_report_certified(const ld_report* rep);
LD_API int ld_report_iterations(const ld_report* rep);
LD_API int ld_report_oracle_calls(const ld_report* rep);
LD_API double ld_report_millis(const ld_report* rep);
LD_API size_t ld_report_vertex_count(const ld_report* rep);
LD_API const char* ld_report_termination(const ld_report* rep);
LD_API ld_status ld_report_to_json(const ld_report* rep, char** out);
LD_API ld_status ld_report_trace_csv(const ld_report* rep, char** out);
/* P - rho at the end of the solve; a new handle. */
LD_API ld_status ld_report_final_query(const ld_report* rep, ld_behavior** out);

/* Exact F_min over all R^A S^B vertices; LD_CAP_EXCEEDED above cap. */
LD_API ld_status ld_reference_f_min(const ld_behavior* P, uint64_t cap,
                                    double* f_min);

/* Oracle on a residual table g. exact != 0 selects brute force (cap on R^A),
 * otherwise multistart with `trials` starts (0: d_NS). value receives the
 * maximum; json (optional) receives {"r":[..],"s":[..],"value":..,...}. */
LD_API ld_status ld_oracle_query(const ld_behavior* g, int exact, int trials,
                                 int sweep_limit, uint64_t seed, uint64_t cap,
                                 double* value, char** json);

#ifdef __cplusplus
}
#endif

#endif
