#include <doctest.h>

#include <random>

#include "localdist/error.hpp"
#include "localdist/geometry.hpp"
#include "localdist/oracle.hpp"
#include "localdist/quantum.hpp"
#include "support/reference_models.hpp"

using namespace localdist;

namespace {

const BehaviorDims k2222{2, 2, 2, 2};

// (2r-1)(2s-1)(-1)^{ab}
Behavior chsh_query() {
  Behavior g(k2222);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int r = 0; r < 2; ++r)
        for (int s = 0; s < 2; ++s)
          g.at(r, s, a, b) = (2 * r - 1) * (2 * s - 1) * ((a & b) ? -1 : 1);
  return g;
}

Behavior random_table(const BehaviorDims& d, std::mt19937_64& rng) {
  std::normal_distribution<double> n01;
  Behavior g(d);
  for (double& v : g.data()) v = n01(rng);
  return g;
}

// Maximum over every strategy pair, without the best-reply shortcut.
double exhaustive_max(const Behavior& g) {
  const auto W = MeasurementWeights::uniform(g.dims());
  double best = -1e300;
  for (const auto& sp : testref::enumerate(g.dims()))
    best = std::max(best, oracle_value(g, sp, W));
  return best;
}

}  // namespace

TEST_CASE("oracle value") {
  const auto W = MeasurementWeights::uniform(k2222);
  CHECK(oracle_value(Behavior(k2222), {{0, 1}, {1, 1}}, W) == 0.0);

  Behavior d11(k2222);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) d11.at(1, 1, a, b) = 1.0;
  CHECK(oracle_value(d11, {{1, 1}, {1, 1}}, W) == doctest::Approx(1.0));

  CHECK(oracle_value(chsh_query(), {{1, 1}, {1, 0}}, W) == doctest::Approx(0.5));
}

TEST_CASE("block sweeps") {
  const Behavior zero(k2222);
  CHECK(sweep_bob(zero, {1, 0}) == std::vector<int>{0, 0});
  CHECK(sweep_alice(zero, {1, 1}) == std::vector<int>{0, 0});

  Behavior ds(k2222), dr(k2222);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int x = 0; x < 2; ++x) {
        ds.at(x, 1, a, b) = 1.0;
        dr.at(1, x, a, b) = 1.0;
      }
  CHECK(sweep_bob(ds, {0, 1}) == std::vector<int>{1, 1});
  CHECK(sweep_alice(dr, {0, 1}) == std::vector<int>{1, 1});

  const Behavior chsh = chsh_query();
  CHECK(sweep_bob(chsh, {1, 1}) == std::vector<int>{1, 0});  // b = 1 ties
  CHECK(sweep_alice(chsh, {1, 1}) == std::vector<int>{1, 0});

  CHECK_THROWS_AS(sweep_bob(chsh, {0, 2}), Error);
  CHECK_THROWS_AS(sweep_alice(chsh, {0}), Error);
}

TEST_CASE("block maximization") {
  const auto zero = block_maximize(Behavior(k2222), {0, 0}, 100);
  CHECK(zero.value == 0.0);
  CHECK(zero.sweeps <= 3);
  CHECK_FALSE(zero.hit_sweep_limit);

  Behavior peak(k2222);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) peak.at(0, 0, a, b) = 1.0;
  const auto at_peak = block_maximize(peak, {0, 0}, 100);
  CHECK(at_peak.strategy == StrategyPair{{0, 0}, {0, 0}});
  CHECK(at_peak.sweeps == 2);

  for (auto seed : {std::vector<int>{0, 0}, {0, 1}, {1, 0}, {1, 1}})
    CHECK(block_maximize(chsh_query(), seed, 100).value == doctest::Approx(0.5));

  CHECK_THROWS_AS(block_maximize(peak, {0, 0}, 0), Error);
}

TEST_CASE("block maximization never decreases along sweeps") {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 50; ++rep) {
    const BehaviorDims d{5, 4, 3, 2};
    const Behavior g = random_table(d, rng);
    const auto W = MeasurementWeights::uniform(d);
    std::vector<int> r(d.A);
    for (int& x : r) x = int(rng() % d.R);
    auto s = sweep_bob(g, r);
    double prev = oracle_value(g, {r, s}, W);
    for (int k = 0; k < 10; ++k) {
      r = sweep_alice(g, s);
      const double v1 = oracle_value(g, {r, s}, W);
      s = sweep_bob(g, r);
      const double v2 = oracle_value(g, {r, s}, W);
      CHECK(v1 >= prev - 1e-15);
      CHECK(v2 >= v1 - 1e-15);
      prev = v2;
    }
    const auto ans = block_maximize(g, r, 100);
    CHECK(ans.value == oracle_value(g, ans.strategy, W));
  }
}

TEST_CASE("multistart oracle") {
  OracleConfig cfg = OracleConfig::for_dims(k2222, 9);
  CHECK(cfg.trials == 8);
  CHECK(multistart_oracle(Behavior(k2222), cfg).value == 0.0);
  CHECK(multistart_oracle(pr_box(), cfg).value == doctest::Approx(0.375));

  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 20; ++rep) {
    const BehaviorDims d{3, 3, 2, 2};
    const Behavior g = random_table(d, rng);
    OracleConfig exhaustive;
    exhaustive.trials = 64;  // far more than R^A = 8 distinct seeds
    exhaustive.seed = rep;
    CHECK(multistart_oracle(g, exhaustive).value ==
          doctest::Approx(brute_force_oracle(g).value).epsilon(1e-14));
  }

  cfg.trials = 0;
  CHECK_THROWS_AS(multistart_oracle(pr_box(), cfg), Error);
}

TEST_CASE("multistart is reproducible and independent of thread count") {
  std::mt19937_64 rng(23);
  const Behavior g = random_table({7, 6, 2, 3}, rng);
  OracleConfig cfg = OracleConfig::for_dims(g.dims(), 42);
  const auto one = multistart_oracle(g, cfg);
  cfg.threads = 3;
  const auto three = multistart_oracle(g, cfg);
  CHECK(one.strategy == three.strategy);
  CHECK(one.value == three.value);
  CHECK(one.sweeps == three.sweeps);
  CHECK(multistart_oracle(g, cfg).strategy == one.strategy);
}

TEST_CASE("brute force oracle") {
  CHECK(brute_force_oracle(Behavior(k2222)).value == 0.0);
  CHECK(brute_force_oracle(chsh_query()).value == doctest::Approx(0.5));
  CHECK(brute_force_oracle(pr_box()).value == doctest::Approx(0.375));

  std::mt19937_64 rng(29);
  for (int rep = 0; rep < 20; ++rep) {
    const BehaviorDims d{3, 2, 2, 3};
    const Behavior g = random_table(d, rng);
    const auto ans = brute_force_oracle(g);
    CHECK(ans.value == doctest::Approx(exhaustive_max(g)).epsilon(1e-14));
    CHECK(multistart_oracle(g, OracleConfig::for_dims(d, rep)).value <= ans.value + 1e-15);
  }

  CHECK_THROWS_AS(brute_force_oracle(Behavior({20, 1, 2, 2}), 1000), Error);
  try {
    brute_force_oracle(Behavior({20, 1, 2, 2}), 1000);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::CapExceeded);
  }
}

TEST_CASE("adding a constant shifts values and keeps the maximizer") {
  std::mt19937_64 rng(31);
  const BehaviorDims d{4, 3, 2, 2};
  const Behavior g = random_table(d, rng);
  Behavior h = g;
  for (double& v : h.data()) v += 0.75;
  const auto a1 = brute_force_oracle(g), a2 = brute_force_oracle(h);
  CHECK(a1.strategy == a2.strategy);
  CHECK(a2.value == doctest::Approx(a1.value + 0.75));
}
