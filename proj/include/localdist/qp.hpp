#pragma once

// Weighted least squares over the local cone restricted to a vertex set:
//
//   minimize F(chi) = 1/2 sum (P - rho(chi))^2 W   subject to chi >= 0,
//
// with chi supported on a given set of strategies. Solved by conjugate
// gradients with exact line searches clipped at chi = 0; the direction is
// reset to the projected gradient whenever the active set changes.
//
// Also hosts the restricted/outer dual bounds and the stopping tests that
// drive the distance solver.

#include <optional>
#include <vector>

#include "localdist/behavior.hpp"
#include "localdist/geometry.hpp"

namespace localdist {

struct RestrictedSolveParams {
  double gamma = 0.5;            // strong stopping condition, 0 < gamma < 1
  double inner_tolerance = 1e-12;  // projected gradient <= tol * (1 + F)
  int max_inner_iterations = 20000;
  double pin_threshold = 1e-14;  // chi <= this with outward gradient is pinned
  bool record_trace = false;
};

// Extra information the outer loop hands to the inner solve.
struct StopContext {
  // Latest oracle value. When set, the solve stops as soon as the strong
  // stopping condition holds for gamma * (alpha_scale * alpha)^2.
  std::optional<double> alpha;
  double alpha_scale = 1.0;
};

enum class InnerTermination { StrongCondition, InnerTolerance, IterationCap };

const char* to_string(InnerTermination t);

struct InnerStep {
  double F = 0.0;                // value after the step
  double projected_gradient = 0.0;
  bool active_set_changed = false;
  bool direction_reset = false;  // direction == projected gradient
  bool clipped = false;          // step stopped at a chi = 0 boundary
};

struct RestrictedSolution {
  WeightedVertexSet chi;  // rescaled so that sum rho (P - rho) W = 0
  Behavior rho;
  double F = 0.0;         // functional_value(P, rho, W), recomputed
  double beta = 0.0;      // max over the set of G(P - rho)
  double scale = 1.0;     // slackness factor applied at exit
  std::vector<StrategyPair> active;  // strategies pinned at chi = 0
  InnerTermination termination = InnerTermination::IterationCap;
  int iterations = 0;
  std::vector<InnerStep> trace;
};

// `omega` carries the warm-start weights. Requires a nonempty set.
RestrictedSolution solve_restricted(const Behavior& P,
                                    const WeightedVertexSet& omega,
                                    const RestrictedSolveParams& params = {},
                                    const StopContext& stop = {});

// t = (sum rho P W) / (sum rho^2 W), the factor making chi' = t chi satisfy
// sum rho' (P - rho') W = 0. Returns 1 when rho vanishes.
double slackness_scale(const WeightedVertexSet& chi, const Behavior& P);
WeightedVertexSet rescale_slackness(const WeightedVertexSet& chi,
                                    const Behavior& P);

// max over strategies in omega of G(g).
double restricted_beta(const WeightedVertexSet& omega, const Behavior& g,
                       const MeasurementWeights& W);

// 1/2 sum {P^2 - (rho + beta)^2} W; a lower bound on the restricted optimum.
double restricted_lower_bound(const Behavior& P, const Behavior& rho,
                              double beta, const MeasurementWeights& W);

// RS beta^2 + 2 sum (beta - g) rho W, the right-hand side shared by the
// strong stopping test and the zero-weight certificate.
double stopping_rhs(double beta, const Behavior& rho, const Behavior& g,
                    const MeasurementWeights& W);

// gamma alpha^2 >= RS beta^2 + 2 sum (beta - g) rho W
bool outer_stop_satisfied(double alpha, double beta, const Behavior& rho,
                          const Behavior& g, const MeasurementWeights& W,
                          double gamma);

// Sufficient test that the exact restricted minimizer gives `sp` zero
// weight: G_sp(g) < -sqrt(stopping_rhs) - 1e-12. Support vertices of the
// exact minimizer have G = 0, so the inequality must be strict.
// rho must be slackness-normalized.
bool certify_zero_weight(const StrategyPair& sp, const Behavior& g, double beta,
                         const Behavior& rho, const MeasurementWeights& W);

}  // namespace localdist
