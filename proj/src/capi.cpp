#include "localdist/localdist.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <random>
#include <string>

#include "localdist/error.hpp"
#include "localdist/quantum.hpp"
#include "localdist/serialize.hpp"
#include "localdist/solver.hpp"

struct ld_behavior {
  localdist::Behavior P;
};

struct ld_report {
  localdist::SolveReport rep;
  localdist::SolveOptions opts;
};

namespace {

thread_local std::string last_error;

ld_status status_of(localdist::ErrorKind k) {
  using localdist::ErrorKind;
  switch (k) {
    case ErrorKind::InvalidArgument: return LD_INVALID_ARGUMENT;
    case ErrorKind::DimensionMismatch: return LD_DIMENSION_MISMATCH;
    case ErrorKind::Validation: return LD_VALIDATION;
    case ErrorKind::CapExceeded: return LD_CAP_EXCEEDED;
    case ErrorKind::Parse: return LD_PARSE;
  }
  return LD_INTERNAL;
}

template <class F>
ld_status guarded(F&& body) {
  try {
    return body();
  } catch (const localdist::Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return LD_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return LD_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return LD_INTERNAL;
  }
}

ld_status null_arg(const char* what) {
  last_error = std::string("null argument: ") + what;
  return LD_INVALID_ARGUMENT;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

ld_status wrap(localdist::Behavior P, ld_behavior** out) {
  *out = new ld_behavior{std::move(P)};
  return LD_OK;
}

localdist::Plane plane_of(ld_plane p) {
  if (p == LD_PLANE_XY) return localdist::Plane::XY;
  if (p == LD_PLANE_XZ) return localdist::Plane::XZ;
  localdist::fail(localdist::ErrorKind::InvalidArgument, "unknown plane");
}

}  // namespace

extern "C" {

const char* ld_version(void) { return "1.0.0"; }

const char* ld_last_error(void) { return last_error.c_str(); }

const char* ld_status_name(ld_status s) {
  switch (s) {
    case LD_OK: return "ok";
    case LD_INVALID_ARGUMENT: return "invalid-argument";
    case LD_VALIDATION: return "validation";
    case LD_NOT_CONVERGED: return "not-converged";
    case LD_CAP_EXCEEDED: return "cap-exceeded";
    case LD_PARSE: return "parse";
    case LD_DIMENSION_MISMATCH: return "dimension-mismatch";
    case LD_INTERNAL: return "internal";
  }
  return "unknown";
}

void ld_string_free(char* s) { std::free(s); }

ld_status ld_behavior_from_json(const char* json, ld_behavior** out) {
  if (!json) return null_arg("json");
  if (!out) return null_arg("out");
  return guarded([&] { return wrap(localdist::behavior_from_json(json), out); });
}

ld_status ld_behavior_from_table(int A, int B, int R, int S, const double* table,
                                 ld_behavior** out) {
  if (!table) return null_arg("table");
  if (!out) return null_arg("out");
  return guarded([&] {
    const localdist::BehaviorDims d{A, B, R, S};
    localdist::check_dims(d);
    localdist::Behavior P(d);
    std::size_t idx = 0;
    for (int r = 0; r < R; ++r)
      for (int s = 0; s < S; ++s)
        for (int a = 0; a < A; ++a)
          for (int b = 0; b < B; ++b) P.at(r, s, a, b) = table[idx++];
    return wrap(std::move(P), out);
  });
}

ld_status ld_behavior_pr_box(ld_behavior** out) {
  if (!out) return null_arg("out");
  return guarded([&] { return wrap(localdist::pr_box(), out); });
}

ld_status ld_behavior_uniform(int A, int B, int R, int S, ld_behavior** out) {
  if (!out) return null_arg("out");
  return guarded([&] { return wrap(localdist::uniform_behavior({A, B, R, S}), out); });
}

ld_status ld_behavior_local_mixture(int A, int B, int R, int S, int k,
                                    uint64_t seed, ld_behavior** out) {
  if (!out) return null_arg("out");
  return guarded([&] {
    std::mt19937_64 rng(seed);
    return wrap(localdist::random_local_mixture({A, B, R, S}, k, rng), out);
  });
}

ld_status ld_behavior_vertex(int A, int B, int R, int S, const int* r, const int* s,
                             ld_behavior** out) {
  if (!r) return null_arg("r");
  if (!s) return null_arg("s");
  if (!out) return null_arg("out");
  return guarded([&] {
    const localdist::BehaviorDims d{A, B, R, S};
    localdist::check_dims(d);
    localdist::StrategyPair sp{{r, r + A}, {s, s + B}};
    return wrap(localdist::vertex_behavior(sp, d), out);
  });
}

ld_status ld_behavior_qubit(ld_state_kind kind, double param, ld_plane alice_plane,
                            const double* alice_angles, int A, ld_plane bob_plane,
                            const double* bob_angles, int B, ld_behavior** out) {
  if (!alice_angles) return null_arg("alice_angles");
  if (!bob_angles) return null_arg("bob_angles");
  if (!out) return null_arg("out");
  return guarded([&] {
    if (A < 1 || B < 1)
      localdist::fail(localdist::ErrorKind::InvalidArgument, "need at least one setting");
    localdist::TwoQubitState st;
    if (kind == LD_STATE_PURE) st = localdist::TwoQubitState::pure(param);
    else if (kind == LD_STATE_WERNER) st = localdist::TwoQubitState::werner(param);
    else localdist::fail(localdist::ErrorKind::InvalidArgument, "unknown state kind");
    localdist::MeasurementFamily fa{{alice_angles, alice_angles + A}, plane_of(alice_plane)};
    localdist::MeasurementFamily fb{{bob_angles, bob_angles + B}, plane_of(bob_plane)};
    return wrap(localdist::qubit_behavior(st, fa, fb), out);
  });
}

void ld_behavior_free(ld_behavior* P) { delete P; }

ld_status ld_behavior_dims(const ld_behavior* P, int* A, int* B, int* R, int* S) {
  if (!P) return null_arg("P");
  const auto& d = P->P.dims();
  if (A) *A = d.A;
  if (B) *B = d.B;
  if (R) *R = d.R;
  if (S) *S = d.S;
  return LD_OK;
}

ld_status ld_behavior_get(const ld_behavior* P, int r, int s, int a, int b,
                          double* out) {
  if (!P) return null_arg("P");
  if (!out) return null_arg("out");
  const auto& d = P->P.dims();
  if (r < 0 || r >= d.R || s < 0 || s >= d.S || a < 0 || a >= d.A || b < 0 || b >= d.B) {
    last_error = "index out of range";
    return LD_INVALID_ARGUMENT;
  }
  *out = P->P(r, s, a, b);
  return LD_OK;
}

ld_status ld_behavior_validate(const ld_behavior* P, double tol, int* ok,
                               double* worst_normalization, double* worst_negativity,
                               double* worst_signaling) {
  if (!P) return null_arg("P");
  if (!ok) return null_arg("ok");
  return guarded([&] {
    const auto v = localdist::validate_behavior(P->P, tol);
    *ok = v.ok() ? 1 : 0;
    if (worst_normalization) *worst_normalization = v.worst_normalization;
    if (worst_negativity) *worst_negativity = v.worst_negativity;
    if (worst_signaling) *worst_signaling = v.worst_signaling;
    return LD_OK;
  });
}

ld_status ld_behavior_to_json(const ld_behavior* P, char** out) {
  if (!P) return null_arg("P");
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = dup_string(localdist::behavior_to_json(P->P));
    return LD_OK;
  });
}

ld_status ld_planar_angles(int M, double offset, double* out) {
  if (!out) return null_arg("out");
  return guarded([&] {
    const auto f = localdist::planar_family(M, localdist::Plane::XY, offset);
    std::copy(f.angles.begin(), f.angles.end(), out);
    return LD_OK;
  });
}

double ld_chained_offset(int M) {
  return M >= 1 ? localdist::chained_offset(M) : 0.0;
}

void ld_solve_options_init(ld_solve_options* opts) {
  if (!opts) return;
  const localdist::SolveOptions d;
  opts->epsilon = d.epsilon;
  opts->gamma = d.gamma;
  opts->oracle_mode = LD_ORACLE_HEURISTIC;
  opts->oracle_trials = d.oracle_trials;
  opts->sweep_limit = d.sweep_limit;
  opts->oracle_threads = d.oracle_threads;
  opts->seed = d.seed;
  opts->enumeration_cap = d.enumeration_cap;
  opts->max_outer_iterations = d.max_outer_iterations;
  opts->max_inner_iterations = d.max_inner_iterations;
  opts->inner_tolerance = d.inner_tolerance;
  opts->validation_tolerance = d.validation_tolerance;
  opts->strict_cleanup = d.strict_cleanup ? 1 : 0;
}

ld_status ld_compute_distance(const ld_behavior* P, const ld_solve_options* opts,
                              ld_report** out) {
  if (!P) return null_arg("P");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    localdist::SolveOptions o;
    if (opts) {
      o.epsilon = opts->epsilon;
      o.gamma = opts->gamma;
      switch (opts->oracle_mode) {
        case LD_ORACLE_HEURISTIC: o.oracle_mode = localdist::OracleMode::Heuristic; break;
        case LD_ORACLE_EXACT: o.oracle_mode = localdist::OracleMode::Exact; break;
        case LD_ORACLE_CERTIFY:
          o.oracle_mode = localdist::OracleMode::HeuristicWithExactFinal;
          break;
        default:
          localdist::fail(localdist::ErrorKind::InvalidArgument, "unknown oracle mode");
      }
      o.oracle_trials = opts->oracle_trials;
      o.sweep_limit = opts->sweep_limit;
      o.oracle_threads = opts->oracle_threads;
      o.seed = opts->seed;
      o.enumeration_cap = opts->enumeration_cap;
      o.max_outer_iterations = opts->max_outer_iterations;
      o.max_inner_iterations = opts->max_inner_iterations;
      o.inner_tolerance = opts->inner_tolerance;
      o.validation_tolerance = opts->validation_tolerance;
      o.strict_cleanup = opts->strict_cleanup != 0;
    }
    auto rep = localdist::compute_distance(P->P, o);
    const bool converged = rep.termination != localdist::Termination::MaxIterations;
    *out = new ld_report{std::move(rep), o};
    if (!converged) {
      last_error = "iteration cap reached before the gap closed";
      return LD_NOT_CONVERGED;
    }
    return LD_OK;
  });
}

void ld_report_free(ld_report* rep) { delete rep; }

double ld_report_distance(const ld_report* r) { return r ? r->rep.distance : 0.0; }
double ld_report_f_plus(const ld_report* r) { return r ? r->rep.F_plus : 0.0; }
double ld_report_f_minus(const ld_report* r) { return r ? r->rep.F_minus : 0.0; }
double ld_report_gap(const ld_report* r) { return r ? r->rep.gap : 0.0; }
int ld_report_certified(const ld_report* r) { return r && r->rep.certified ? 1 : 0; }
int ld_report_iterations(const ld_report* r) { return r ? r->rep.iterations : 0; }
int ld_report_oracle_calls(const ld_report* r) { return r ? r->rep.oracle_calls : 0; }
double ld_report_millis(const ld_report* r) { return r ? r->rep.millis : 0.0; }
size_t ld_report_vertex_count(const ld_report* r) { return r ? r->rep.vertices.size() : 0; }
const char* ld_report_termination(const ld_report* r) {
  return r ? localdist::to_string(r->rep.termination) : "";
}

ld_status ld_report_to_json(const ld_report* rep, char** out) {
  if (!rep) return null_arg("rep");
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = dup_string(localdist::report_to_json(rep->rep, rep->opts));
    return LD_OK;
  });
}

ld_status ld_report_trace_csv(const ld_report* rep, char** out) {
  if (!rep) return null_arg("rep");
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = dup_string(localdist::trace_to_csv(rep->rep));
    return LD_OK;
  });
}

ld_status ld_report_final_query(const ld_report* rep, ld_behavior** out) {
  if (!rep) return null_arg("rep");
  if (!out) return null_arg("out");
  return guarded([&] { return wrap(rep->rep.final_query, out); });
}

ld_status ld_reference_f_min(const ld_behavior* P, uint64_t cap, double* f_min) {
  if (!P) return null_arg("P");
  if (!f_min) return null_arg("f_min");
  return guarded([&] {
    *f_min = localdist::reference_distance(P->P, cap);
    return LD_OK;
  });
}

ld_status ld_oracle_query(const ld_behavior* g, int exact, int trials,
                          int sweep_limit, uint64_t seed, uint64_t cap,
                          double* value, char** json) {
  if (!g) return null_arg("g");
  return guarded([&] {
    localdist::OracleAnswer ans;
    if (exact) {
      ans = localdist::brute_force_oracle(g->P, cap);
    } else {
      auto cfg = localdist::OracleConfig::for_dims(g->P.dims(), seed);
      if (trials > 0) cfg.trials = trials;
      cfg.sweep_limit = sweep_limit;
      ans = localdist::multistart_oracle(g->P, cfg);
    }
    if (value) *value = ans.value;
    if (json) *json = dup_string(localdist::oracle_answer_to_json(ans));
    return LD_OK;
  });
}

}  // extern "C"
