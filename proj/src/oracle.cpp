#include "localdist/oracle.hpp"

#include <algorithm>
#include <limits>
#include <string>
#include <thread>

#include "localdist/error.hpp"

namespace localdist {

namespace {

// Unweighted sum_{a,b} g(r_a, s_b; a, b).
double raw_value(const Behavior& g, const std::vector<int>& r,
                 const std::vector<int>& s) {
  const auto& d = g.dims();
  auto t = g.data();
  double acc = 0.0;
  for (int a = 0; a < d.A; ++a) {
    for (int b = 0; b < d.B; ++b) {
      acc += t[Behavior::offset(d, r[a], s[b], a, b)];
    }
  }
  return acc;
}

void check_sequence(const std::vector<int>& seq, int len, int range,
                    const char* who) {
  if (seq.size() != std::size_t(len))
    fail(ErrorKind::DimensionMismatch, std::string(who) + " sequence length");
  for (int v : seq)
    if (v < 0 || v >= range)
      fail(ErrorKind::InvalidArgument, std::string(who) + " outcome out of range");
}

}  // namespace

OracleConfig OracleConfig::for_dims(const BehaviorDims& dims, std::uint64_t seed) {
  OracleConfig cfg;
  cfg.trials = int(std::max<long long>(1, ns_dimension(dims)));
  cfg.seed = seed;
  return cfg;
}

double oracle_value(const Behavior& g, const StrategyPair& sp,
                    const MeasurementWeights& W) {
  require_same_dims(g.dims(), W.dims, "oracle_value");
  check_strategy(sp, g.dims());
  return raw_value(g, sp.r, sp.s) * W.w;
}

std::vector<int> sweep_bob(const Behavior& g, const std::vector<int>& r) {
  const auto& d = g.dims();
  check_sequence(r, d.A, d.R, "Alice");
  auto t = g.data();
  std::vector<int> s(d.B, 0);
  std::vector<double> acc(d.S);
  for (int b = 0; b < d.B; ++b) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (int a = 0; a < d.A; ++a) {
      const double* row = t.data() + Behavior::offset(d, r[a], 0, a, b);
      for (int k = 0; k < d.S; ++k) acc[k] += row[k];
    }
    int best = 0;
    for (int k = 1; k < d.S; ++k)
      if (acc[k] > acc[best]) best = k;
    s[b] = best;
  }
  return s;
}

std::vector<int> sweep_alice(const Behavior& g, const std::vector<int>& s) {
  const auto& d = g.dims();
  check_sequence(s, d.B, d.S, "Bob");
  auto t = g.data();
  std::vector<int> r(d.A, 0);
  std::vector<double> acc(d.R);
  for (int a = 0; a < d.A; ++a) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (int b = 0; b < d.B; ++b) {
      const double* col = t.data() + Behavior::offset(d, 0, s[b], a, b);
      for (int k = 0; k < d.R; ++k) acc[k] += col[std::size_t(k) * d.S];
    }
    int best = 0;
    for (int k = 1; k < d.R; ++k)
      if (acc[k] > acc[best]) best = k;
    r[a] = best;
  }
  return r;
}

OracleAnswer block_maximize(const Behavior& g, const std::vector<int>& seed_r,
                            int sweep_limit) {
  if (sweep_limit < 1) fail(ErrorKind::InvalidArgument, "sweep limit must be >= 1");
  const auto& d = g.dims();
  check_sequence(seed_r, d.A, d.R, "Alice");

  OracleAnswer ans;
  std::vector<int> r = seed_r;
  std::vector<int> s = sweep_bob(g, r);
  double val = raw_value(g, r, s);
  ans.sweeps = 1;

  bool converged = false;
  for (int round = 0; round < sweep_limit && !converged; ++round) {
    auto r_next = sweep_alice(g, s);
    ++ans.sweeps;
    const double v_alice = raw_value(g, r_next, s);
    if (!(v_alice > val)) {
      converged = true;
      break;
    }
    r = std::move(r_next);
    val = v_alice;

    auto s_next = sweep_bob(g, r);
    ++ans.sweeps;
    const double v_bob = raw_value(g, r, s_next);
    if (!(v_bob > val)) {
      converged = true;
      break;
    }
    s = std::move(s_next);
    val = v_bob;
  }
  ans.hit_sweep_limit = !converged;
  ans.strategy = {std::move(r), std::move(s)};
  ans.value = oracle_value(g, ans.strategy, MeasurementWeights::uniform(d));
  return ans;
}

OracleAnswer multistart_oracle(const Behavior& g, const OracleConfig& cfg,
                               std::mt19937_64& rng) {
  if (cfg.trials < 1) fail(ErrorKind::InvalidArgument, "trials must be >= 1");
  if (cfg.sweep_limit < 1)
    fail(ErrorKind::InvalidArgument, "sweep limit must be >= 1");
  const auto& d = g.dims();

  // Seeds are drawn up front so the result does not depend on scheduling.
  std::uniform_int_distribution<int> outcome(0, d.R - 1);
  std::vector<std::vector<int>> seeds(cfg.trials, std::vector<int>(d.A));
  for (auto& seed : seeds)
    for (int& v : seed) v = outcome(rng);

  std::vector<OracleAnswer> results(cfg.trials);
  const int workers = std::clamp(cfg.threads, 1, cfg.trials);
  if (workers == 1) {
    for (int t = 0; t < cfg.trials; ++t)
      results[t] = block_maximize(g, seeds[t], cfg.sweep_limit);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (int t = w; t < cfg.trials; t += workers)
          results[t] = block_maximize(g, seeds[t], cfg.sweep_limit);
      });
    }
  }

  OracleAnswer best = std::move(results[0]);
  int sweeps = best.sweeps;
  bool limit = best.hit_sweep_limit;
  for (int t = 1; t < cfg.trials; ++t) {
    sweeps += results[t].sweeps;
    limit = limit || results[t].hit_sweep_limit;
    if (results[t].value > best.value) best = std::move(results[t]);
  }
  best.sweeps = sweeps;
  best.hit_sweep_limit = limit;
  return best;
}

OracleAnswer multistart_oracle(const Behavior& g, const OracleConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  return multistart_oracle(g, cfg, rng);
}

OracleAnswer brute_force_oracle(const Behavior& g, std::uint64_t cap) {
  const auto& d = g.dims();
  std::uint64_t count = 1;
  for (int a = 0; a < d.A; ++a) {
    if (count > cap / std::uint64_t(d.R)) {
      fail(ErrorKind::CapExceeded,
           "brute-force oracle: R^A exceeds enumeration cap " + std::to_string(cap));
    }
    count *= std::uint64_t(d.R);
  }

  auto t = g.data();
  const int rs = d.R * d.S;
  std::vector<int> r(d.A, 0);
  std::vector<int> best_r = r;
  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> acc(d.S);

  for (std::uint64_t it = 0; it < count; ++it) {
    // Bob's best reply decouples over b.
    double total = 0.0;
    for (int b = 0; b < d.B; ++b) {
      std::fill(acc.begin(), acc.end(), 0.0);
      for (int a = 0; a < d.A; ++a) {
        const double* row = t.data() + (std::size_t(a) * d.B + b) * rs + r[a] * d.S;
        for (int k = 0; k < d.S; ++k) acc[k] += row[k];
      }
      total += *std::max_element(acc.begin(), acc.end());
    }
    if (total > best) {
      best = total;
      best_r = r;
    }
    for (int a = d.A - 1; a >= 0; --a) {
      if (++r[a] < d.R) break;
      r[a] = 0;
    }
  }

  OracleAnswer ans;
  ans.strategy.s = sweep_bob(g, best_r);
  ans.strategy.r = std::move(best_r);
  ans.value = oracle_value(g, ans.strategy, MeasurementWeights::uniform(d));
  return ans;
}

}  // namespace localdist
