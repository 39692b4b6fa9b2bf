// Acceptance checks. Prints one line per criterion:
//   criterion <n>: PASS|FAIL|WARN  <details>
// Usage: acceptance [n ...]   (no arguments runs all of them)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "localdist/quantum.hpp"
#include "localdist/solver.hpp"
#include "support/reference_models.hpp"

using namespace localdist;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  enum Kind { Pass, Fail, Warn } kind = Pass;
  std::string detail;
};

Outcome verdict(bool ok, std::string detail) {
  return {ok ? Outcome::Pass : Outcome::Fail, std::move(detail)};
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Behavior chained(const TwoQubitState& st, int M, Plane pl) {
  return qubit_behavior(st, planar_family(M, pl), planar_family(M, pl, chained_offset(M)));
}

// Distance accuracy 1e-5 corresponds to F accuracy (1e-5)^2 / 2.
constexpr double kDistanceEps = 1e-5;
constexpr double kFEps = 0.5 * kDistanceEps * kDistanceEps;

// Small instances shared by the trace criteria (reference solve feasible).
struct Instance {
  std::string name;
  Behavior P;
};

std::vector<Instance> small_instances() {
  std::vector<Instance> out;
  out.push_back({"pr-box", pr_box()});
  for (double g : {0.3, 0.7, 1.0})
    for (auto pl : {Plane::XY, Plane::XZ})
      for (int M : {2, 3})
        out.push_back({fmt("pure(%.1f) M=%d %s", g, M, pl == Plane::XY ? "xy" : "xz"),
                       chained(TwoQubitState::pure(g), M, pl)});
  for (double p : {0.6, 0.9})
    out.push_back({fmt("werner(%.1f) M=3", p), chained(TwoQubitState::werner(p), 3, Plane::XY)});
  out.push_back({"pure(0.8) M=6 xy", chained(TwoQubitState::pure(0.8), 6, Plane::XY)});
  std::mt19937_64 rng(2024);
  for (int k : {2, 5})
    out.push_back({fmt("local-mixture k=%d", k), random_local_mixture({3, 3, 2, 2}, k, rng)});
  return out;
}

Outcome criterion1() {
  const auto t0 = Clock::now();
  SolveOptions opts;
  opts.epsilon = 1e-6;
  opts.oracle_mode = OracleMode::HeuristicWithExactFinal;
  const auto rep = compute_distance(pr_box(), opts);
  const double fmin = reference_distance(pr_box());
  const double secs = seconds_since(t0);
  const bool d_ok = std::abs(rep.distance - 0.25) <= 1e-4;
  const bool f_ok = std::abs(fmin - 1.0 / 32.0) <= 1e-10;
  return verdict(d_ok && f_ok && secs < 1.0,
                 fmt("distance %.10f (want 0.25 +- 1e-4), reference F_min %.12f (want %.12f), "
                     "%.3f s; cone optimum is 1/40",
                     rep.distance, fmin, 1.0 / 32.0, secs));
}

Outcome criterion2() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    std::mt19937_64 rng(1000 + i);
    const int k = 1 + int(rng() % 10);
    const Behavior P = random_local_mixture({5, 5, 2, 2}, k, rng);
    SolveOptions opts;
    opts.epsilon = kFEps;
    opts.seed = i;
    worst = std::max(worst, compute_distance(P, opts).distance);
  }
  const double secs = seconds_since(t0);
  return verdict(worst <= 1e-5 && secs < 10.0,
                 fmt("20 instances, max distance %.3e, %.2f s (eps on F %.1e)", worst, secs, kFEps));
}

Outcome criterion3() {
  int solves = 0, violations = 0, compared = 0;
  double worst_slack = 0.0;
  for (const auto& inst : small_instances()) {
    for (double eps : {1e-5, 1e-8}) {
      SolveOptions opts;
      opts.epsilon = eps;
      opts.oracle_mode = OracleMode::HeuristicWithExactFinal;
      const auto rep = compute_distance(inst.P, opts);
      ++solves;
      for (const auto& t : rep.trace)
        if (t.best_F_minus > t.F_plus) ++violations;
      if (rep.gap > eps || !rep.certified) ++violations;
      if (all_strategies(inst.P.dims(), 10000).size() <= 10000) {
        const double ref = reference_distance(inst.P);
        ++compared;
        worst_slack = std::max({worst_slack, rep.F_minus - ref, ref - rep.F_plus});
        if (rep.F_minus > ref + 1e-10 || ref > rep.F_plus + 1e-10) ++violations;
      }
    }
  }
  return verdict(violations == 0,
                 fmt("%d certify solves, %d against the reference, %d violations, worst slack %.2e",
                     solves, compared, violations, worst_slack));
}

std::vector<SolveReport> trace_corpus() {
  std::vector<SolveReport> out;
  for (const auto& inst : small_instances()) {
    for (auto mode : {OracleMode::Heuristic, OracleMode::Exact}) {
      SolveOptions opts;
      opts.epsilon = 1e-9;
      opts.oracle_mode = mode;
      out.push_back(compute_distance(inst.P, opts));
    }
  }
  for (int M : {6, 8, 10}) {
    SolveOptions opts;
    out.push_back(compute_distance(chained(TwoQubitState::pure(1.0), M, Plane::XY), opts));
    out.push_back(compute_distance(chained(TwoQubitState::pure(0.5), M, Plane::XZ), opts));
  }
  return out;
}

Outcome criterion4() {
  int rows = 0, bad = 0;
  double worst = -1e300;
  for (const auto& rep : trace_corpus()) {
    for (std::size_t n = 0; n + 1 < rep.trace.size(); ++n) {
      const auto& t = rep.trace[n];
      const double excess =
          rep.trace[n + 1].F_plus - (t.F_plus - 0.25 * t.alpha * t.alpha);
      worst = std::max(worst, excess);
      ++rows;
      if (excess > 1e-10) ++bad;
    }
  }
  return verdict(bad == 0, fmt("%d consecutive pairs, %d violations, max excess %.2e", rows, bad,
                               worst));
}

Outcome criterion5() {
  int rows = 0, bad = 0;
  double tightest = 1e300;
  for (const auto& inst : small_instances()) {
    const double ref = reference_distance(inst.P);
    const double rs = double(inst.P.dims().block_size());
    for (auto mode : {OracleMode::Heuristic, OracleMode::Exact}) {
      SolveOptions opts;
      opts.epsilon = 1e-9;
      opts.oracle_mode = mode;
      const auto rep = compute_distance(inst.P, opts);
      for (std::size_t n = 0; n < rep.trace.size(); ++n) {
        const double bound = (rs + 2.0 + 2.0 * std::sqrt(rs)) /
                             (2.0 * std::sqrt((1.0 - opts.gamma) * double(n + 1)));
        const double err = rep.trace[n].F_plus - ref;
        tightest = std::min(tightest, bound - err);
        ++rows;
        if (err > bound) ++bad;
      }
    }
  }
  return verdict(bad == 0, fmt("%d iterates, %d above the envelope, min margin %.3e", rows, bad,
                               tightest));
}

Outcome criterion6() {
  int rows = 0, bad = 0;
  double worst_ratio = 0.0;
  auto scan = [&](const SolveReport& rep) {
    const double cap = double(ns_dimension(rep.dims) + 1);
    for (const auto& t : rep.trace) {
      ++rows;
      worst_ratio = std::max(worst_ratio, double(t.omega_after) / cap);
      if (double(t.omega_after) > cap) ++bad;
    }
  };
  for (const auto& rep : trace_corpus()) scan(rep);
  for (double g : {0.0, 0.2, 0.4, 0.42, 0.6}) {
    SolveOptions opts;
    opts.epsilon = kFEps;
    scan(compute_distance(chained(TwoQubitState::pure(g), 10, Plane::XY), opts));
    scan(compute_distance(chained(TwoQubitState::pure(g), 10, Plane::XZ), opts));
  }
  return verdict(bad == 0, fmt("%d cleanups, %d over d_NS+1, max |Omega|/(d_NS+1) = %.3f", rows,
                               bad, worst_ratio));
}

Outcome criterion7() {
  const auto t0 = Clock::now();
  std::vector<Behavior> pool;
  auto harvest = [&](const Behavior& P, std::uint64_t seed) {
    SolveOptions opts;
    opts.seed = seed;
    opts.on_oracle_query = [&](const Behavior& g) { pool.push_back(g); };
    compute_distance(P, opts);
  };
  std::uint64_t seed = 0;
  for (int M : {4, 6, 8, 10}) {
    harvest(chained(TwoQubitState::pure(1.0), M, Plane::XY), ++seed);
    harvest(chained(TwoQubitState::pure(0.6), M, Plane::XZ), ++seed);
    harvest(chained(TwoQubitState::werner(0.9), M, Plane::XY), ++seed);
  }
  const std::size_t want = 100;
  if (pool.size() < want) return verdict(false, fmt("only %zu queries harvested", pool.size()));

  int equal = 0, greater = 0;
  for (std::size_t i = 0; i < want; ++i) {
    const Behavior& g = pool[i * pool.size() / want];
    const auto cfg = OracleConfig::for_dims(g.dims(), 5000 + i);
    const double heur = multistart_oracle(g, cfg).value;
    const double exact = brute_force_oracle(g).value;
    if (heur > exact + 1e-15) ++greater;
    if (std::abs(heur - exact) <= 1e-12 * (1.0 + std::abs(exact))) ++equal;
  }
  const double secs = seconds_since(t0);
  return verdict(equal >= 95 && greater == 0 && secs < 60.0,
                 fmt("%d/100 equal to brute force, %d greater, %zu harvested, %.1f s", equal,
                     greater, pool.size(), secs));
}

Outcome criterion8() {
  const int M = 10;
  SolveOptions opts;
  opts.epsilon = kFEps;
  std::vector<double> gammas, dists;
  for (int i = 0; i <= 20; ++i) {
    const double g = 0.30 + 0.01 * i;
    gammas.push_back(g);
    dists.push_back(compute_distance(chained(TwoQubitState::pure(g), M, Plane::XY), opts).distance);
  }
  // Crossing: midpoint between the last zero and the first nonzero point,
  // zero meaning within the distance resolution.
  double crossing = std::nan("");
  for (std::size_t i = 0; i + 1 < gammas.size(); ++i)
    if (dists[i] <= kDistanceEps && dists[i + 1] > kDistanceEps)
      crossing = 0.5 * (gammas[i] + gammas[i + 1]);
  bool monotone_after = true;
  for (std::size_t i = 0; i + 1 < gammas.size(); ++i)
    if (gammas[i] > crossing && dists[i + 1] < dists[i]) monotone_after = false;

  const double xz0 = compute_distance(chained(TwoQubitState::pure(0.0), M, Plane::XZ), opts).distance;
  const double xz2 = compute_distance(chained(TwoQubitState::pure(0.2), M, Plane::XZ), opts).distance;
  const bool ok = crossing >= 0.35 && crossing <= 0.45 && xz0 <= 1e-5 && xz2 > kDistanceEps;
  return verdict(ok, fmt("xy crossing at gamma %.3f (%s after), xz distance %.2e at 0 and %.2e "
                         "at 0.2 (eps on F %.1e)",
                         crossing, monotone_after ? "increasing" : "not monotone", xz0, xz2,
                         kFEps));
}

Outcome criterion9() {
  std::vector<double> xs, ys;
  std::ostringstream pts;
  for (int M : {8, 12, 16, 24, 32}) {
    SolveOptions opts;
    opts.epsilon = 1e-3;
    const auto rep = compute_distance(chained(TwoQubitState::pure(1.0), M, Plane::XY), opts);
    xs.push_back(std::log(double(M)));
    ys.push_back(std::log(std::max(rep.millis, 1e-3)));
    pts << " M=" << M << ":" << fmt("%.0fms", rep.millis);
  }
  const double n = double(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  Outcome out{slope <= 6.5 ? Outcome::Pass : Outcome::Warn,
              fmt("log-log slope %.2f (limit 6.5);", slope) + pts.str()};
  return out;
}

Outcome criterion10() {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  double worst = 0.0;
  int tables = 0;
  for (double g : {0.0, 0.4, 0.6, 0.8, 1.0}) {
    const auto rho = testref::pure_state(g);
    for (int k = 0; k < 8; ++k) {
      const double ta = angle(rng), tb = angle(rng);
      for (auto pa : {Plane::XY, Plane::XZ})
        for (auto pb : {Plane::XY, Plane::XZ}) {
          const MeasurementFamily fa{{ta}, pa}, fb{{tb}, pb};
          const Behavior P = qubit_behavior(TwoQubitState::pure(g), fa, fb);
          const auto u = bloch_direction(ta, pa), v = bloch_direction(tb, pb);
          for (int r = 0; r < 2; ++r)
            for (int s = 0; s < 2; ++s) {
              const double want =
                  testref::born(rho, {u[0], u[1], u[2]}, r, {v[0], v[1], v[2]}, s);
              worst = std::max(worst, std::abs(P(r, s, 0, 0) - want));
            }
          ++tables;
        }
    }
  }
  return verdict(worst <= 1e-12, fmt("%d tables, max deviation %.2e", tables, worst));
}

}  // namespace

int main(int argc, char** argv) {
  const std::map<int, std::function<Outcome()>> criteria{
      {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4},  {5, criterion5},
      {6, criterion6}, {7, criterion7}, {8, criterion8}, {9, criterion9}, {10, criterion10}};

  std::vector<int> which;
  for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
  if (which.empty())
    for (const auto& [id, fn] : criteria) which.push_back(id);

  int failures = 0;
  for (int id : which) {
    auto it = criteria.find(id);
    if (it == criteria.end()) {
      std::printf("criterion %d: FAIL  unknown criterion\n", id);
      ++failures;
      continue;
    }
    Outcome o;
    try {
      o = it->second();
    } catch (const std::exception& e) {
      o = {Outcome::Fail, std::string("exception: ") + e.what()};
    }
    const char* tag = o.kind == Outcome::Pass ? "PASS" : o.kind == Outcome::Warn ? "WARN" : "FAIL";
    std::printf("criterion %d: %s  %s\n", id, tag, o.detail.c_str());
    std::fflush(stdout);
    if (o.kind == Outcome::Fail) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
