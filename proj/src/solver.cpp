#include "localdist/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <random>
#include <sstream>

#include "localdist/error.hpp"

namespace localdist {

const char* to_string(OracleMode m) {
  switch (m) {
    case OracleMode::Heuristic: return "heuristic";
    case OracleMode::Exact: return "exact";
    case OracleMode::HeuristicWithExactFinal: return "certify";
  }
  return "unknown";
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::GapReached: return "gap-reached";
    case Termination::LocalityShortcut: return "locality-shortcut";
    case Termination::MaxIterations: return "max-iterations";
  }
  return "unknown";
}

void check_options(const SolveOptions& o) {
  if (!(o.epsilon > 0.0)) fail(ErrorKind::InvalidArgument, "epsilon must be > 0");
  if (!(o.gamma > 0.0 && o.gamma < 1.0))
    fail(ErrorKind::InvalidArgument, "gamma must lie in (0,1)");
  if (o.oracle_trials < 0) fail(ErrorKind::InvalidArgument, "trials must be >= 0");
  if (o.sweep_limit < 1) fail(ErrorKind::InvalidArgument, "sweep limit must be >= 1");
  if (o.oracle_threads < 1) fail(ErrorKind::InvalidArgument, "threads must be >= 1");
  if (o.max_outer_iterations < 1)
    fail(ErrorKind::InvalidArgument, "max outer iterations must be >= 1");
  if (o.max_inner_iterations < 1)
    fail(ErrorKind::InvalidArgument, "max inner iterations must be >= 1");
  if (!(o.inner_tolerance > 0.0))
    fail(ErrorKind::InvalidArgument, "inner tolerance must be > 0");
  if (!(o.validation_tolerance > 0.0))
    fail(ErrorKind::InvalidArgument, "validation tolerance must be > 0");
}

double global_lower_bound(const Behavior& P, const Behavior& rho, double alpha,
                          const MeasurementWeights& W) {
  // Same algebraic form as the restricted bound, with the global maximum.
  return restricted_lower_bound(P, rho, alpha, W);
}

double duality_gap(const Behavior& P, const Behavior& rho, double alpha,
                   const MeasurementWeights& W) {
  require_same_dims(P.dims(), rho.dims(), "duality_gap");
  require_same_dims(P.dims(), W.dims, "duality_gap");
  auto p = P.data();
  auto q = rho.data();
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) acc += q[i] * (alpha - (p[i] - q[i]));
  const double rs = double(P.dims().block_size());
  return 0.5 * rs * alpha * alpha + acc * W.w;
}

namespace {

using Clock = std::chrono::steady_clock;

double millis_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

constexpr double kCleanupThreshold = 1e-12;   // relative to total weight
constexpr double kRefineAlphaScale = 0.8;
constexpr double kWarmAlphaScale = 0.5;
constexpr int kMaxRefinements = 8;

}  // namespace

SolveReport compute_distance(const Behavior& P, const SolveOptions& opts) {
  check_options(opts);
  const auto valid = validate_behavior(P, opts.validation_tolerance);
  if (!valid.ok()) {
    std::ostringstream msg;
    msg << "behavior failed validation (normalization " << valid.worst_normalization
        << ", negativity " << valid.worst_negativity << ", signaling "
        << valid.worst_signaling << ", tol " << opts.validation_tolerance << ")";
    fail(ErrorKind::Validation, msg.str());
  }

  const auto t0 = Clock::now();
  const BehaviorDims& dims = P.dims();
  const auto W = MeasurementWeights::uniform(dims);
  std::mt19937_64 rng(opts.seed);

  OracleConfig cfg = OracleConfig::for_dims(dims, opts.seed);
  if (opts.oracle_trials > 0) cfg.trials = opts.oracle_trials;
  cfg.sweep_limit = opts.sweep_limit;
  cfg.threads = opts.oracle_threads;

  SolveReport report;
  report.dims = dims;

  auto consult = [&](const Behavior& g, bool exact) {
    ++report.oracle_calls;
    if (opts.on_oracle_query) opts.on_oracle_query(g);
    return exact ? brute_force_oracle(g, opts.enumeration_cap)
                 : multistart_oracle(g, cfg, rng);
  };
  const bool exact_throughout = opts.oracle_mode == OracleMode::Exact;

  RestrictedSolveParams qp;
  qp.gamma = opts.gamma;
  qp.inner_tolerance = opts.inner_tolerance;
  qp.max_inner_iterations = opts.max_inner_iterations;

  // Seed the vertex set with the oracle's answer for P itself; its weight is
  // the exact one-dimensional minimizer (vertices have unit W-norm).
  const OracleAnswer first = consult(P, exact_throughout);
  WeightedVertexSet omega(dims);
  omega.add(first.strategy, std::max(0.0, first.value));

  double best_certified = 0.0;  // F_min >= 0 holds unconditionally
  double best_any = 0.0;
  std::optional<double> alpha_hint;
  RestrictedSolution sol;
  report.termination = Termination::MaxIterations;

  for (int n = 0; n < opts.max_outer_iterations; ++n) {
    IterationRecord rec;
    rec.iter = n;
    sol = solve_restricted(P, omega, qp, {alpha_hint, kWarmAlphaScale});
    rec.inner_iterations = sol.iterations;

    if (sol.F <= opts.epsilon) {
      rec.F_plus = sol.F;
      rec.best_F_minus = best_certified;
      rec.F_minus = best_certified;
      rec.gap = sol.F - best_certified;
      rec.beta = sol.beta;
      rec.omega_before = rec.omega_after = sol.chi.size();
      rec.exact_alpha = true;
      rec.millis = millis_since(t0);
      report.trace.push_back(rec);
      report.termination = Termination::LocalityShortcut;
      report.certified = true;
      break;
    }

    Behavior g = residual(P, sol.rho);
    OracleAnswer ans = consult(g, exact_throughout);
    rec.sweeps = ans.sweeps;

    // The inner solve stopped on the previous alpha; make sure the strong
    // condition also holds for the one just returned.
    for (int k = 0; k < kMaxRefinements &&
                    sol.termination == InnerTermination::StrongCondition &&
                    !outer_stop_satisfied(ans.value, sol.beta, sol.rho, g, W,
                                          opts.gamma);
         ++k) {
      sol = solve_restricted(P, sol.chi, qp, {ans.value, kRefineAlphaScale});
      rec.inner_iterations += sol.iterations;
      g = residual(P, sol.rho);
      ans = consult(g, exact_throughout);
      rec.sweeps += ans.sweeps;
    }

    bool exact = exact_throughout;
    // Any alpha at least the true maximum gives a valid bound; the maximum
    // over the current set is a free lower estimate of it.
    double alpha = std::max(ans.value, sol.beta);
    double f_minus = global_lower_bound(P, sol.rho, alpha, W);
    best_any = std::max(best_any, f_minus);
    if (exact) best_certified = std::max(best_certified, f_minus);

    const bool certify = opts.oracle_mode == OracleMode::HeuristicWithExactFinal;
    double best = opts.oracle_mode == OracleMode::Heuristic ? best_any
                  : certify                                 ? best_any
                                                            : best_certified;
    bool done = sol.F - best <= opts.epsilon;

    if (done && certify) {
      OracleAnswer exact_ans = consult(g, true);
      exact = true;
      ans = std::move(exact_ans);
      alpha = std::max(ans.value, sol.beta);
      f_minus = global_lower_bound(P, sol.rho, alpha, W);
      best_certified = std::max(best_certified, f_minus);
      best = best_certified;
      done = sol.F - best <= opts.epsilon;
      // Heuristic bounds are no longer trusted from here on.
      best_any = best_certified;
    }

    rec.F_plus = sol.F;
    rec.F_minus = f_minus;
    rec.best_F_minus = best;
    rec.gap = sol.F - best;
    rec.alpha = ans.value;
    rec.beta = sol.beta;
    rec.exact_alpha = exact;
    rec.omega_before = sol.chi.size();

    if (done) {
      rec.omega_after = sol.chi.size();
      rec.millis = millis_since(t0);
      report.trace.push_back(rec);
      report.termination = Termination::GapReached;
      report.certified = exact;
      break;
    }

    omega = sol.chi;
    if (opts.strict_cleanup) {
      for (std::size_t i = 0; i < omega.size(); ++i)
        if (certify_zero_weight(omega[i].strategy, g, sol.beta, sol.rho, W))
          omega.set_weight(i, 0.0);
    }
    omega.prune(kCleanupThreshold * omega.total_weight());
    const double step = std::max(0.0, ans.value);
    if (omega.contains(ans.strategy)) {
      // Only possible when the restricted solve is inexact: take the step
      // on the existing vertex and tighten the inner solve.
      for (std::size_t i = 0; i < omega.size(); ++i)
        if (omega[i].strategy == ans.strategy)
          omega.set_weight(i, omega[i].weight + step);
      qp.inner_tolerance = std::max(qp.inner_tolerance * 1e-2, 1e-16);
    } else {
      omega.add(ans.strategy, step);
    }
    alpha_hint = ans.value;
    rec.omega_after = omega.size();
    rec.millis = millis_since(t0);
    report.trace.push_back(rec);
  }

  report.iterations = int(report.trace.size());
  report.F_plus = sol.F;
  const auto& last = report.trace.back();
  report.F_minus = last.best_F_minus;
  report.gap = report.F_plus - report.F_minus;
  if (report.termination == Termination::MaxIterations)
    report.certified = exact_throughout;
  report.distance = std::sqrt(2.0 * std::max(0.0, report.F_plus));
  report.final_query = residual(P, sol.rho);
  report.vertices = std::move(sol.chi);
  report.millis = millis_since(t0);
  return report;
}

}  // namespace localdist
