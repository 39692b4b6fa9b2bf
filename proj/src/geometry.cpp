#include "localdist/geometry.hpp"

#include <cmath>
#include <string>

#include "localdist/error.hpp"

namespace localdist {

void check_strategy(const StrategyPair& sp, const BehaviorDims& dims) {
  if (sp.r.size() != std::size_t(dims.A) || sp.s.size() != std::size_t(dims.B)) {
    fail(ErrorKind::DimensionMismatch,
         "strategy lengths (" + std::to_string(sp.r.size()) + "," +
             std::to_string(sp.s.size()) + ") do not match settings (" +
             std::to_string(dims.A) + "," + std::to_string(dims.B) + ")");
  }
  for (int v : sp.r)
    if (v < 0 || v >= dims.R)
      fail(ErrorKind::InvalidArgument, "Alice outcome out of range");
  for (int v : sp.s)
    if (v < 0 || v >= dims.S)
      fail(ErrorKind::InvalidArgument, "Bob outcome out of range");
}

VertexOffsets::VertexOffsets(const StrategyPair& sp, const BehaviorDims& d) {
  const int rs = d.R * d.S;
  alice.resize(d.A);
  bob.resize(d.B);
  for (int a = 0; a < d.A; ++a) alice[a] = a * d.B * rs + sp.r[a] * d.S;
  for (int b = 0; b < d.B; ++b) bob[b] = b * rs + sp.s[b];
}

double VertexOffsets::gather(std::span<const double> table) const {
  double acc = 0.0;
  for (int base : alice) {
    const double* row = table.data() + base;
    for (int off : bob) acc += row[off];
  }
  return acc;
}

void VertexOffsets::scatter(std::span<double> table, double w) const {
  for (int base : alice) {
    double* row = table.data() + base;
    for (int off : bob) row[off] += w;
  }
}

Behavior vertex_behavior(const StrategyPair& sp, const BehaviorDims& dims) {
  check_strategy(sp, dims);
  Behavior v(dims);
  VertexOffsets(sp, dims).scatter(v.data(), 1.0);
  return v;
}

WeightedVertexSet::WeightedVertexSet(const BehaviorDims& dims) : dims_(dims) {
  check_dims(dims);
}

std::size_t WeightedVertexSet::add(StrategyPair sp, double weight) {
  check_strategy(sp, dims_);
  if (!(weight >= 0.0))
    fail(ErrorKind::InvalidArgument, "vertex weight must be >= 0");
  if (!index_.insert(sp).second)
    fail(ErrorKind::InvalidArgument, "strategy already present in vertex set");
  entries_.push_back({std::move(sp), weight});
  return entries_.size() - 1;
}

void WeightedVertexSet::set_weight(std::size_t i, double weight) {
  if (!(weight >= 0.0))
    fail(ErrorKind::InvalidArgument, "vertex weight must be >= 0");
  entries_.at(i).weight = weight;
}

std::size_t WeightedVertexSet::prune(double threshold) {
  std::vector<Entry> kept;
  kept.reserve(entries_.size());
  for (auto& e : entries_) {
    if (e.weight > threshold) {
      kept.push_back(std::move(e));
    } else {
      index_.erase(e.strategy);
    }
  }
  const std::size_t removed = entries_.size() - kept.size();
  entries_ = std::move(kept);
  return removed;
}

double WeightedVertexSet::total_weight() const {
  double t = 0.0;
  for (const auto& e : entries_) t += e.weight;
  return t;
}

void WeightedVertexSet::scale(double t) {
  if (!(t >= 0.0)) fail(ErrorKind::InvalidArgument, "scale must be >= 0");
  for (auto& e : entries_) e.weight *= t;
}

Behavior local_mixture(const WeightedVertexSet& vs) {
  Behavior rho(vs.dims());
  for (const auto& e : vs.entries()) {
    if (e.weight == 0.0) continue;
    VertexOffsets(e.strategy, vs.dims()).scatter(rho.data(), e.weight);
  }
  return rho;
}

int strategies_rank(const std::vector<StrategyPair>& strategies,
                    const BehaviorDims& dims) {
  if (strategies.empty())
    fail(ErrorKind::InvalidArgument, "strategies_rank: empty list");
  constexpr double pivot = 1e-10;
  std::vector<std::vector<double>> basis;
  for (const auto& sp : strategies) {
    auto v = vertex_behavior(sp, dims);
    std::vector<double> x(v.data().begin(), v.data().end());
    // Two passes of modified Gram-Schmidt.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : basis) {
        double dot = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) dot += x[i] * q[i];
        for (std::size_t i = 0; i < x.size(); ++i) x[i] -= dot * q[i];
      }
    }
    double norm = 0.0;
    for (double xi : x) norm += xi * xi;
    norm = std::sqrt(norm);
    if (norm > pivot) {
      for (double& xi : x) xi /= norm;
      basis.push_back(std::move(x));
    }
  }
  return int(basis.size());
}

}  // namespace localdist
