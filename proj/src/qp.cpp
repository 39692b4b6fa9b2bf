#include "localdist/qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "localdist/error.hpp"
#include "localdist/oracle.hpp"

namespace localdist {

const char* to_string(InnerTermination t) {
  switch (t) {
    case InnerTermination::StrongCondition: return "strong-condition";
    case InnerTermination::InnerTolerance: return "inner-tolerance";
    case InnerTermination::IterationCap: return "iteration-cap";
  }
  return "unknown";
}

namespace {

// Working state of one restricted solve, in the coordinates of the vertex
// set: x are the weights, corr_p[k] = G_k(P), grad[k] = G_k(P - rho) is the
// negative gradient of F with respect to x[k].
struct CgState {
  const Behavior& P;
  const MeasurementWeights W;
  std::vector<VertexOffsets> vertices;
  std::vector<double> x;
  std::vector<double> corr_p;
  std::vector<double> grad;
  std::vector<double> rho;
  double F = 0.0;

  CgState(const Behavior& p, const WeightedVertexSet& omega)
      : P(p), W(MeasurementWeights::uniform(p.dims())) {
    const std::size_t n = omega.size();
    vertices.reserve(n);
    x.resize(n);
    corr_p.resize(n);
    grad.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      vertices.emplace_back(omega[k].strategy, p.dims());
      x[k] = omega[k].weight;
      corr_p[k] = vertices[k].gather(P.data()) * W.w;
    }
    refresh();
  }

  void refresh() {
    rho.assign(P.data().size(), 0.0);
    for (std::size_t k = 0; k < x.size(); ++k)
      if (x[k] != 0.0) vertices[k].scatter(rho, x[k]);
    for (std::size_t k = 0; k < x.size(); ++k)
      grad[k] = corr_p[k] - vertices[k].gather(rho) * W.w;
    auto p = P.data();
    double acc = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i) {
      const double diff = p[i] - rho[i];
      acc += diff * diff;
    }
    F = 0.5 * acc * W.w;
  }

  // Strong stopping condition evaluated for the slackness-rescaled iterate,
  // without materializing it: with t the rescale factor,
  // G'_k = G_k(P) - t * G_k(rho) and sum rho' W = t * sum x.
  bool strong_condition(double alpha, double gamma) const {
    double s1 = 0.0, s2 = 0.0, total = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      s1 += x[k] * corr_p[k];
      s2 += x[k] * (corr_p[k] - grad[k]);
      total += x[k];
    }
    const double t = s2 > 0.0 ? s1 / s2 : 1.0;
    double beta = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < x.size(); ++k)
      beta = std::max(beta, corr_p[k] - t * (corr_p[k] - grad[k]));
    const double rs = double(P.dims().block_size());
    const double rhs = rs * beta * beta + 2.0 * beta * t * total;
    return gamma * alpha * alpha >= rhs;
  }
};

}  // namespace

RestrictedSolution solve_restricted(const Behavior& P,
                                    const WeightedVertexSet& omega,
                                    const RestrictedSolveParams& params,
                                    const StopContext& stop) {
  if (omega.empty()) fail(ErrorKind::InvalidArgument, "solve_restricted: empty vertex set");
  require_same_dims(P.dims(), omega.dims(), "solve_restricted");
  if (!(params.gamma > 0.0 && params.gamma < 1.0))
    fail(ErrorKind::InvalidArgument, "gamma must lie in (0,1)");
  if (params.max_inner_iterations < 0)
    fail(ErrorKind::InvalidArgument, "max inner iterations must be >= 0");

  CgState st(P, omega);
  const std::size_t n = st.x.size();
  const double w = st.W.w;

  RestrictedSolution out;
  std::vector<char> free_set(n, 1), prev_free;
  std::vector<double> dir(n, 0.0), pg(n, 0.0), pg_old(n, 0.0), hd(n, 0.0);
  std::vector<double> rho_dir(P.data().size());
  double pg_old_sq = 0.0;
  bool restart = true;
  out.termination = InnerTermination::IterationCap;

  int it = 0;
  for (; it < params.max_inner_iterations; ++it) {
    for (std::size_t k = 0; k < n; ++k) {
      if (st.x[k] <= params.pin_threshold && st.grad[k] <= 0.0) {
        st.x[k] = 0.0;
        free_set[k] = 0;
      } else {
        free_set[k] = 1;
      }
    }
    const bool changed = free_set != prev_free;

    double pg_max = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      pg[k] = free_set[k] ? st.grad[k] : 0.0;
      pg_max = std::max(pg_max, std::abs(pg[k]));
    }
    if (pg_max <= params.inner_tolerance * (1.0 + st.F)) {
      out.termination = InnerTermination::InnerTolerance;
      break;
    }
    if (stop.alpha &&
        st.strong_condition(*stop.alpha * stop.alpha_scale, params.gamma)) {
      out.termination = InnerTermination::StrongCondition;
      break;
    }

    bool reset = restart || changed;
    if (!reset) {
      double num = 0.0;
      for (std::size_t k = 0; k < n; ++k) num += pg[k] * (pg[k] - pg_old[k]);
      const double beta_cg = std::max(0.0, num / pg_old_sq);
      double slope = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        dir[k] = pg[k] + beta_cg * dir[k];
        slope += dir[k] * st.grad[k];
      }
      if (!(slope > 0.0)) reset = true;
    }
    if (reset) dir = pg;

    std::fill(rho_dir.begin(), rho_dir.end(), 0.0);
    for (std::size_t k = 0; k < n; ++k)
      if (dir[k] != 0.0) st.vertices[k].scatter(rho_dir, dir[k]);
    double dhd = 0.0, slope = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      hd[k] = st.vertices[k].gather(rho_dir) * w;
      dhd += dir[k] * hd[k];
      slope += dir[k] * st.grad[k];
    }
    if (!(dhd > 0.0)) {
      // Direction in the null space of the vertex map: F is flat along it.
      out.termination = InnerTermination::InnerTolerance;
      break;
    }

    double step = slope / dhd;
    std::size_t blocking = n;
    for (std::size_t k = 0; k < n; ++k) {
      if (dir[k] < 0.0) {
        const double limit = st.x[k] / -dir[k];
        if (limit < step) {
          step = limit;
          blocking = k;
        }
      }
    }
    const bool clipped = blocking != n;

    for (std::size_t k = 0; k < n; ++k) {
      st.x[k] = std::max(0.0, st.x[k] + step * dir[k]);
      st.grad[k] -= step * hd[k];
    }
    if (clipped) st.x[blocking] = 0.0;
    for (std::size_t i = 0; i < rho_dir.size(); ++i) st.rho[i] += step * rho_dir[i];
    st.F += -step * slope + 0.5 * step * step * dhd;

    pg_old = pg;
    pg_old_sq = 0.0;
    for (double v : pg) pg_old_sq += v * v;
    restart = clipped;
    prev_free = free_set;

    if (params.record_trace) {
      out.trace.push_back({st.F, pg_max, changed, reset, clipped});
    }
    if ((it + 1) % 64 == 0) st.refresh();
  }
  out.iterations = it;

  WeightedVertexSet chi(P.dims());
  for (std::size_t k = 0; k < n; ++k) {
    chi.add(omega[k].strategy, st.x[k]);
    if (st.x[k] == 0.0) out.active.push_back(omega[k].strategy);
  }
  out.scale = slackness_scale(chi, P);
  chi.scale(out.scale);
  out.rho = local_mixture(chi);
  out.F = functional_value(P, out.rho, st.W);
  out.beta = restricted_beta(chi, residual(P, out.rho), st.W);
  out.chi = std::move(chi);
  return out;
}

double slackness_scale(const WeightedVertexSet& chi, const Behavior& P) {
  require_same_dims(P.dims(), chi.dims(), "slackness_scale");
  const auto W = MeasurementWeights::uniform(P.dims());
  const Behavior rho = local_mixture(chi);
  const double rho_sq = weighted_inner(rho, rho, W);
  if (!(rho_sq > 0.0)) return 1.0;
  return std::max(0.0, weighted_inner(rho, P, W) / rho_sq);
}

WeightedVertexSet rescale_slackness(const WeightedVertexSet& chi,
                                    const Behavior& P) {
  WeightedVertexSet out = chi;
  out.scale(slackness_scale(chi, P));
  return out;
}

double restricted_beta(const WeightedVertexSet& omega, const Behavior& g,
                       const MeasurementWeights& W) {
  if (omega.empty()) fail(ErrorKind::InvalidArgument, "restricted_beta: empty vertex set");
  double beta = -std::numeric_limits<double>::infinity();
  for (const auto& e : omega.entries())
    beta = std::max(beta, oracle_value(g, e.strategy, W));
  return beta;
}

double restricted_lower_bound(const Behavior& P, const Behavior& rho,
                              double beta, const MeasurementWeights& W) {
  require_same_dims(P.dims(), rho.dims(), "restricted_lower_bound");
  require_same_dims(P.dims(), W.dims, "restricted_lower_bound");
  auto p = P.data();
  auto q = rho.data();
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double shifted = q[i] + beta;
    acc += p[i] * p[i] - shifted * shifted;
  }
  return 0.5 * acc * W.w;
}

double stopping_rhs(double beta, const Behavior& rho, const Behavior& g,
                    const MeasurementWeights& W) {
  require_same_dims(rho.dims(), g.dims(), "stopping_rhs");
  require_same_dims(rho.dims(), W.dims, "stopping_rhs");
  auto q = rho.data();
  auto r = g.data();
  double acc = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) acc += (beta - r[i]) * q[i];
  const double rs = double(rho.dims().block_size());
  return rs * beta * beta + 2.0 * acc * W.w;
}

bool outer_stop_satisfied(double alpha, double beta, const Behavior& rho,
                          const Behavior& g, const MeasurementWeights& W,
                          double gamma) {
  return gamma * alpha * alpha >= stopping_rhs(beta, rho, g, W);
}

bool certify_zero_weight(const StrategyPair& sp, const Behavior& g, double beta,
                         const Behavior& rho, const MeasurementWeights& W) {
  const double rhs = std::sqrt(std::max(0.0, stopping_rhs(beta, rho, g, W)));
  return oracle_value(g, sp, W) < -rhs - 1e-12;
}

}  // namespace localdist
