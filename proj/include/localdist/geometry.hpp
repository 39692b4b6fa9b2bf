#pragma once

// Deterministic local strategies (vertices of the local polytope) and the
// nonnegative vertex weights that define a point of the local cone.

#include <compare>
#include <cstddef>
#include <set>
#include <vector>

#include "localdist/behavior.hpp"

namespace localdist {

// One outcome per setting for each party: r[a] in [0,R), s[b] in [0,S).
// Ordered lexicographically on r, then s.
struct StrategyPair {
  std::vector<int> r;
  std::vector<int> s;

  friend auto operator<=>(const StrategyPair&, const StrategyPair&) = default;
  friend bool operator==(const StrategyPair&, const StrategyPair&) = default;
};

void check_strategy(const StrategyPair& sp, const BehaviorDims& dims);

// Precomputed table offsets for a strategy: entry (r_a, s_b; a, b) lives at
// alice[a] + bob[b]. Used by every hot loop that walks a vertex.
struct VertexOffsets {
  std::vector<int> alice;
  std::vector<int> bob;

  VertexOffsets() = default;
  VertexOffsets(const StrategyPair& sp, const BehaviorDims& dims);

  // sum_{a,b} table[alice[a] + bob[b]], unweighted.
  double gather(std::span<const double> table) const;
  // table[alice[a] + bob[b]] += w for every (a,b).
  void scatter(std::span<double> table, double w) const;
};

Behavior vertex_behavior(const StrategyPair& sp, const BehaviorDims& dims);

// Active set with weights chi >= 0, no duplicate strategies.
class WeightedVertexSet {
 public:
  struct Entry {
    StrategyPair strategy;
    double weight = 0.0;
  };

  WeightedVertexSet() = default;
  explicit WeightedVertexSet(const BehaviorDims& dims);

  const BehaviorDims& dims() const { return dims_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  const Entry& operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<Entry>& entries() const { return entries_; }

  bool contains(const StrategyPair& sp) const { return index_.count(sp) > 0; }

  // Throws on duplicates, invalid strategies or negative weights.
  std::size_t add(StrategyPair sp, double weight);
  void set_weight(std::size_t i, double weight);

  // Drops entries with weight <= threshold; returns how many were removed.
  std::size_t prune(double threshold);

  double total_weight() const;

  // Multiplies every weight by t >= 0.
  void scale(double t);

 private:
  BehaviorDims dims_{};
  std::vector<Entry> entries_;
  std::set<StrategyPair> index_;
};

// rho = sum chi(sp) * vertex_behavior(sp)
Behavior local_mixture(const WeightedVertexSet& vs);

// Rank of the vertex behaviors seen as vectors of length R*S*A*B, by
// Gram-Schmidt with pivot threshold 1e-10. Test-scale helper.
int strategies_rank(const std::vector<StrategyPair>& strategies,
                    const BehaviorDims& dims);

}  // namespace localdist
