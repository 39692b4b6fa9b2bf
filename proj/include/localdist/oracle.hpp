#pragma once

// The oracle: given coefficients g(r,s;a,b), find the strategy pair
// maximizing G(r,s) = sum_{a,b} g(r_a, s_b; a, b) W(a,b). For a Bell
// functional this maximum is its classical bound.
//
// Two implementations are provided. multistart_oracle runs alternating
// block maximization (Bob's sequence, then Alice's, until no progress) from
// several random Alice seeds; it is a heuristic and may under-report the
// maximum. brute_force_oracle enumerates Alice's sequences and computes
// Bob's best reply per setting in closed form, so its cost is
// R^A * S*A*B rather than R^A * S^B.

#include <cstdint>
#include <random>
#include <vector>

#include "localdist/behavior.hpp"
#include "localdist/geometry.hpp"

namespace localdist {

struct OracleAnswer {
  StrategyPair strategy;
  double value = 0.0;  // recomputed with oracle_value, never taken from search
  int sweeps = 0;      // total block sweeps spent (all trials)
  bool hit_sweep_limit = false;
};

struct OracleConfig {
  int trials = 1;
  std::uint64_t seed = 0;
  int sweep_limit = 100;
  int threads = 1;

  // trials = d_NS, the default used by the distance solver.
  static OracleConfig for_dims(const BehaviorDims& dims, std::uint64_t seed = 0);
};

// Default enumeration cap on R^A for brute_force_oracle.
inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t(1) << 24;

double oracle_value(const Behavior& g, const StrategyPair& sp,
                    const MeasurementWeights& W);

// Per-setting argmax, ties to the lowest outcome index.
std::vector<int> sweep_bob(const Behavior& g, const std::vector<int>& r);
std::vector<int> sweep_alice(const Behavior& g, const std::vector<int>& s);

// Alternates sweep_bob / sweep_alice starting from Alice's seed. Stops as
// soon as a sweep fails to strictly increase G, returning the pair from
// before that sweep (a local maximum over single-block moves), or after
// `sweep_limit` rounds.
OracleAnswer block_maximize(const Behavior& g, const std::vector<int>& seed_r,
                            int sweep_limit);

// Best answer over cfg.trials seeds drawn uniformly per entry from `rng`.
// Ties go to the lowest trial index, independent of cfg.threads.
OracleAnswer multistart_oracle(const Behavior& g, const OracleConfig& cfg,
                               std::mt19937_64& rng);
// Same, with a generator seeded from cfg.seed.
OracleAnswer multistart_oracle(const Behavior& g, const OracleConfig& cfg);

// Exact maximum. Throws ErrorKind::CapExceeded when R^A > cap.
OracleAnswer brute_force_oracle(const Behavior& g,
                                std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace localdist
