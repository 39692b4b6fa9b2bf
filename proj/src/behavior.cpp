#include "localdist/behavior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "localdist/error.hpp"

namespace localdist {

void check_dims(const BehaviorDims& d) {
  if (d.A < 1 || d.B < 1 || d.R < 1 || d.S < 1) {
    fail(ErrorKind::InvalidArgument,
         "behavior dimensions must all be >= 1 (got A=" + std::to_string(d.A) +
             " B=" + std::to_string(d.B) + " R=" + std::to_string(d.R) +
             " S=" + std::to_string(d.S) + ")");
  }
  // Keep every index representable as a 32-bit int as well; strategy
  // offsets are computed in int arithmetic in the hot loops.
  constexpr std::size_t limit = std::size_t(std::numeric_limits<int>::max());
  std::size_t n = 1;
  for (int v : {d.A, d.B, d.R, d.S}) {
    if (n > limit / std::size_t(v)) {
      fail(ErrorKind::InvalidArgument, "behavior table size overflows");
    }
    n *= std::size_t(v);
  }
}

void require_same_dims(const BehaviorDims& a, const BehaviorDims& b,
                       const char* where) {
  if (!(a == b)) {
    fail(ErrorKind::DimensionMismatch,
         std::string(where) + ": dimension mismatch");
  }
}

Behavior::Behavior(const BehaviorDims& dims) : dims_(dims) {
  check_dims(dims);
  table_.assign(dims.table_size(), 0.0);
}

Behavior::Behavior(const BehaviorDims& dims, std::vector<double> table)
    : dims_(dims), table_(std::move(table)) {
  check_dims(dims);
  if (table_.size() != dims.table_size()) {
    fail(ErrorKind::DimensionMismatch,
         "table has " + std::to_string(table_.size()) + " entries, expected " +
             std::to_string(dims.table_size()));
  }
}

MeasurementWeights MeasurementWeights::uniform(const BehaviorDims& dims) {
  check_dims(dims);
  return {dims, 1.0 / double(dims.block_count())};
}

ValidationReport validate_behavior(const Behavior& P, double tol) {
  if (!(tol > 0.0)) fail(ErrorKind::InvalidArgument, "tolerance must be > 0");
  const auto& d = P.dims();
  if (P.data().size() != d.table_size()) {
    fail(ErrorKind::DimensionMismatch, "validate_behavior: table size");
  }
  ValidationReport rep;

  double min_entry = 0.0;
  for (double v : P.data()) min_entry = std::min(min_entry, v);
  rep.worst_negativity = -min_entry;

  std::vector<double> alice(std::size_t(d.A) * d.B * d.R, 0.0);
  std::vector<double> bob(std::size_t(d.A) * d.B * d.S, 0.0);
  for (int a = 0; a < d.A; ++a) {
    for (int b = 0; b < d.B; ++b) {
      double total = 0.0;
      const std::size_t ab = std::size_t(a) * d.B + b;
      for (int r = 0; r < d.R; ++r) {
        for (int s = 0; s < d.S; ++s) {
          const double v = P(r, s, a, b);
          total += v;
          alice[ab * d.R + r] += v;
          bob[ab * d.S + s] += v;
        }
      }
      rep.worst_normalization =
          std::max(rep.worst_normalization, std::abs(total - 1.0));
    }
  }

  // Alice's marginal must not depend on b, Bob's must not depend on a.
  // Worst violation is the max over all pairs of remote settings.
  double worst = 0.0;
  for (int a = 0; a < d.A; ++a)
    for (int r = 0; r < d.R; ++r)
      for (int b = 0; b < d.B; ++b)
        for (int bb = b + 1; bb < d.B; ++bb) {
          const double x = alice[(std::size_t(a) * d.B + b) * d.R + r];
          const double y = alice[(std::size_t(a) * d.B + bb) * d.R + r];
          worst = std::max(worst, std::abs(x - y));
        }
  for (int b = 0; b < d.B; ++b)
    for (int s = 0; s < d.S; ++s)
      for (int a = 0; a < d.A; ++a)
        for (int aa = a + 1; aa < d.A; ++aa) {
          const double x = bob[(std::size_t(a) * d.B + b) * d.S + s];
          const double y = bob[(std::size_t(aa) * d.B + b) * d.S + s];
          worst = std::max(worst, std::abs(x - y));
        }
  rep.worst_signaling = worst;

  rep.normalized = rep.worst_normalization <= tol;
  rep.nonnegative = rep.worst_negativity <= tol;
  rep.nonsignaling = rep.worst_signaling <= tol;
  return rep;
}

long long ns_dimension(const BehaviorDims& d) {
  check_dims(d);
  const long long A = d.A, B = d.B, R = d.R, S = d.S;
  return A * B * (R - 1) * (S - 1) + A * (R - 1) + B * (S - 1);
}

double functional_value(const Behavior& P, const Behavior& rho,
                        const MeasurementWeights& W) {
  require_same_dims(P.dims(), rho.dims(), "functional_value");
  require_same_dims(P.dims(), W.dims, "functional_value");
  double acc = 0.0;
  auto p = P.data();
  auto q = rho.data();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double diff = p[i] - q[i];
    acc += diff * diff;
  }
  return 0.5 * acc * W.w;
}

Behavior residual(const Behavior& P, const Behavior& rho) {
  require_same_dims(P.dims(), rho.dims(), "residual");
  Behavior g(P.dims());
  auto p = P.data();
  auto q = rho.data();
  auto out = g.data();
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = p[i] - q[i];
  return g;
}

double weighted_inner(const Behavior& x, const Behavior& y,
                      const MeasurementWeights& W) {
  require_same_dims(x.dims(), y.dims(), "weighted_inner");
  require_same_dims(x.dims(), W.dims, "weighted_inner");
  double acc = 0.0;
  auto p = x.data();
  auto q = y.data();
  for (std::size_t i = 0; i < p.size(); ++i) acc += p[i] * q[i];
  return acc * W.w;
}

}  // namespace localdist
