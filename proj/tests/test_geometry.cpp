#include <doctest.h>

#include "localdist/error.hpp"
#include "localdist/geometry.hpp"
#include "localdist/quantum.hpp"

using namespace localdist;

TEST_CASE("vertex behaviors") {
  const BehaviorDims d1{1, 1, 2, 2};
  const Behavior v1 = vertex_behavior({{0}, {1}}, d1);
  CHECK(v1(0, 1, 0, 0) == 1.0);
  CHECK(v1(0, 0, 0, 0) == 0.0);
  CHECK(v1(1, 1, 0, 0) == 0.0);

  const BehaviorDims d{2, 2, 2, 2};
  const Behavior v = vertex_behavior({{0, 1}, {1, 0}}, d);
  CHECK(v(0, 1, 0, 0) == 1.0);
  CHECK(v(0, 0, 0, 1) == 1.0);
  CHECK(v(1, 1, 1, 0) == 1.0);
  CHECK(v(1, 0, 1, 1) == 1.0);
  double total = 0.0;
  for (double x : v.data()) total += x;
  CHECK(total == 4.0);
  CHECK(validate_behavior(v, 1e-15).ok());

  CHECK_THROWS_AS(vertex_behavior({{0, 2}, {0, 0}}, d), Error);
  CHECK_THROWS_AS(vertex_behavior({{0}, {0, 0}}, d), Error);
}

TEST_CASE("gather and scatter agree with the dense vertex") {
  const BehaviorDims d{3, 2, 3, 2};
  const StrategyPair sp{{2, 0, 1}, {1, 0}};
  const VertexOffsets off(sp, d);
  Behavior t(d);
  for (std::size_t i = 0; i < t.data().size(); ++i) t.data()[i] = double(i % 7) - 2.5;
  const Behavior v = vertex_behavior(sp, d);
  double dense = 0.0;
  for (std::size_t i = 0; i < t.data().size(); ++i) dense += t.data()[i] * v.data()[i];
  CHECK(off.gather(t.data()) == doctest::Approx(dense));

  Behavior acc(d);
  off.scatter(acc.data(), 0.5);
  for (std::size_t i = 0; i < acc.data().size(); ++i) CHECK(acc.data()[i] == 0.5 * v.data()[i]);
}

TEST_CASE("weighted vertex set bookkeeping") {
  const BehaviorDims d{2, 2, 2, 2};
  WeightedVertexSet vs(d);
  vs.add({{0, 0}, {0, 0}}, 0.5);
  vs.add({{1, 1}, {1, 1}}, 0.0);
  CHECK(vs.size() == 2);
  CHECK(vs.contains({{1, 1}, {1, 1}}));
  CHECK_THROWS_AS(vs.add({{0, 0}, {0, 0}}, 1.0), Error);
  CHECK_THROWS_AS(vs.add({{0, 1}, {0, 0}}, -1.0), Error);
  CHECK_THROWS_AS(vs.add({{0, 3}, {0, 0}}, 1.0), Error);

  CHECK(vs.prune(1e-12) == 1);
  CHECK(vs.size() == 1);
  CHECK_FALSE(vs.contains({{1, 1}, {1, 1}}));
  vs.scale(4.0);
  CHECK(vs.total_weight() == 2.0);
  vs.set_weight(0, 0.25);
  CHECK(vs[0].weight == 0.25);
}

TEST_CASE("local mixtures") {
  const BehaviorDims d{2, 2, 2, 2};
  const StrategyPair s1{{0, 1}, {1, 0}}, s2{{1, 1}, {0, 0}};

  WeightedVertexSet one(d);
  one.add(s1, 1.0);
  CHECK(local_mixture(one) == vertex_behavior(s1, d));

  WeightedVertexSet two(d);
  two.add(s1, 0.5);
  two.add(s2, 0.5);
  const Behavior mix = local_mixture(two);
  const Behavior v1 = vertex_behavior(s1, d), v2 = vertex_behavior(s2, d);
  for (std::size_t i = 0; i < mix.data().size(); ++i)
    CHECK(mix.data()[i] == doctest::Approx(0.5 * (v1.data()[i] + v2.data()[i])));

  const Behavior zero = local_mixture(WeightedVertexSet(d));
  for (double v : zero.data()) CHECK(v == 0.0);

  // Same total weight in every block.
  WeightedVertexSet three(d);
  three.add(s1, 0.3);
  three.add(s2, 1.1);
  three.add({{0, 0}, {1, 1}}, 0.6);
  const Behavior rho = local_mixture(three);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      double sum = 0.0;
      for (double v : rho.block(a, b)) sum += v;
      CHECK(sum == doctest::Approx(2.0));
    }
}

TEST_CASE("local mixture is linear in the weights") {
  const BehaviorDims d{3, 2, 2, 3};
  const std::vector<StrategyPair> sps{{{0, 1, 1}, {2, 0}}, {{1, 0, 0}, {1, 1}}, {{1, 1, 0}, {0, 2}}};
  const double x1[] = {0.2, 0.0, 1.5}, x2[] = {0.7, 0.4, 0.1};
  WeightedVertexSet a(d), b(d), c(d);
  for (int k = 0; k < 3; ++k) {
    a.add(sps[k], x1[k]);
    b.add(sps[k], x2[k]);
    c.add(sps[k], 2.0 * x1[k] + 3.0 * x2[k]);
  }
  const Behavior ra = local_mixture(a), rb = local_mixture(b), rc = local_mixture(c);
  for (std::size_t i = 0; i < rc.data().size(); ++i)
    CHECK(rc.data()[i] == doctest::Approx(2.0 * ra.data()[i] + 3.0 * rb.data()[i]));
}

TEST_CASE("rank of vertex sets") {
  const BehaviorDims d{2, 2, 2, 2};
  CHECK(strategies_rank({{{0, 0}, {0, 0}}}, d) == 1);
  CHECK(strategies_rank({{{0, 1}, {1, 0}}, {{0, 1}, {1, 0}}}, d) == 1);
  std::vector<StrategyPair> four;
  for (auto r : {std::vector<int>{0, 0}, std::vector<int>{1, 1}})
    for (auto s : {std::vector<int>{0, 0}, std::vector<int>{1, 1}}) four.push_back({r, s});
  CHECK(strategies_rank(four, d) == 4);

  // All 16 vertices span the 9-dimensional affine hull plus the cone
  // direction: d_NS + 1.
  std::vector<StrategyPair> all;
  for (int code = 0; code < 16; ++code)
    all.push_back({{code & 1, (code >> 1) & 1}, {(code >> 2) & 1, (code >> 3) & 1}});
  CHECK(strategies_rank(all, d) == ns_dimension(d) + 1);
  CHECK_THROWS_AS(strategies_rank({}, d), Error);
}
