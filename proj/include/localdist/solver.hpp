#pragma once

// Distance of a behavior from the local cone by vertex generation.
//
// Each outer iteration solves the least-squares problem restricted to the
// current vertex set, asks the oracle for the strategy most correlated
// with the residual g = P - rho, and uses its value alpha for a dual lower
// bound. The loop stops once the upper bound F(+) = F(chi) and the best
// lower bound differ by at most epsilon, or F(+) <= epsilon (then zero is
// within epsilon). Zero-weight vertices are dropped before the oracle's
// vertex is added, which keeps the set linearly independent.

#include <cstdint>
#include <functional>
#include <vector>

#include "localdist/behavior.hpp"
#include "localdist/geometry.hpp"
#include "localdist/oracle.hpp"
#include "localdist/qp.hpp"

namespace localdist {

enum class OracleMode {
  Heuristic,                // multistart block maximization throughout
  Exact,                    // brute force throughout
  HeuristicWithExactFinal,  // heuristic, then brute force to certify the end
};

const char* to_string(OracleMode m);

struct SolveOptions {
  double epsilon = 1e-5;  // target on F(+) - F(-)
  double gamma = 0.5;
  OracleMode oracle_mode = OracleMode::Heuristic;
  int oracle_trials = 0;  // 0 selects d_NS
  int sweep_limit = 100;
  int oracle_threads = 1;
  std::uint64_t seed = 0;
  std::uint64_t enumeration_cap = kDefaultEnumerationCap;
  int max_outer_iterations = 100000;
  int max_inner_iterations = 20000;
  double inner_tolerance = 1e-12;
  double validation_tolerance = 1e-9;
  // Also drop vertices that certify_zero_weight proves unused. Off by
  // default: pruning zero weights is enough in practice.
  bool strict_cleanup = false;

  // Called with every oracle query table (residual P - rho). Optional.
  std::function<void(const Behavior&)> on_oracle_query;
};

void check_options(const SolveOptions& opts);

struct IterationRecord {
  int iter = 0;
  double F_plus = 0.0;
  double F_minus = 0.0;     // bound from this iteration's alpha
  double best_F_minus = 0.0;
  double gap = 0.0;         // F_plus - best_F_minus
  double alpha = 0.0;
  double beta = 0.0;
  std::size_t omega_before = 0;  // before cleanup
  std::size_t omega_after = 0;   // after cleanup and insertion
  int sweeps = 0;
  int inner_iterations = 0;
  bool exact_alpha = false;
  double millis = 0.0;
};

enum class Termination { GapReached, LocalityShortcut, MaxIterations };

const char* to_string(Termination t);

struct SolveReport {
  BehaviorDims dims{};
  double distance = 0.0;  // sqrt(2 F_plus)
  double F_plus = 0.0;
  double F_minus = 0.0;   // best lower bound
  double gap = 0.0;
  bool certified = false;  // lower bound backed by an exact oracle
  Termination termination = Termination::MaxIterations;
  WeightedVertexSet vertices;
  Behavior final_query;  // P - rho at the end: the separating functional
  std::vector<IterationRecord> trace;
  int iterations = 0;
  int oracle_calls = 0;
  double millis = 0.0;
};

SolveReport compute_distance(const Behavior& P, const SolveOptions& opts);

// 1/2 sum {P^2 - (rho + alpha)^2} W. Certified when alpha is the exact
// oracle maximum for g = P - rho.
double global_lower_bound(const Behavior& P, const Behavior& rho, double alpha,
                          const MeasurementWeights& W);

// (RS/2) alpha^2 + sum rho (alpha - g) W, equal to F(rho) - global_lower_bound.
double duality_gap(const Behavior& P, const Behavior& rho, double alpha,
                   const MeasurementWeights& W);

// Default cap on R^A * S^B for reference_distance.
inline constexpr std::uint64_t kDefaultVertexCap = 1000000;

// Exact F_min over the full vertex set by active-set nonnegative least
// squares. Throws ErrorKind::CapExceeded when R^A * S^B > cap.
double reference_distance(const Behavior& P,
                          std::uint64_t cap = kDefaultVertexCap);

// Nonnegative least squares over an explicit vertex list; returns the
// optimal weights (same order). Shared by reference_distance and tests.
std::vector<double> nnls_weights(const Behavior& P,
                                 const std::vector<StrategyPair>& vertices);

// Every strategy pair for the given dimensions, Alice-major.
std::vector<StrategyPair> all_strategies(const BehaviorDims& dims,
                                         std::uint64_t cap = kDefaultVertexCap);

}  // namespace localdist
