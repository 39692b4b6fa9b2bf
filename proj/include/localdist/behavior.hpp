#pragma once

// Bipartite behavior tables P(r,s|a,b), the uniform measurement weight and
// the weighted least-squares functional used throughout the solver.
//
// Storage layout: one contiguous block of R*S entries per setting pair
// (a,b), blocks ordered a-major. Entry (r,s) of a block sits at r*S + s.
// The JSON exchange format uses a different (r,s,a,b) ordering; see
// serialize.hpp.

#include <cstddef>
#include <span>
#include <vector>

namespace localdist {

struct BehaviorDims {
  int A = 1;  // Alice settings
  int B = 1;  // Bob settings
  int R = 1;  // Alice outcomes
  int S = 1;  // Bob outcomes

  std::size_t block_count() const { return std::size_t(A) * std::size_t(B); }
  std::size_t block_size() const { return std::size_t(R) * std::size_t(S); }
  std::size_t table_size() const { return block_count() * block_size(); }

  friend bool operator==(const BehaviorDims&, const BehaviorDims&) = default;
};

// Throws ErrorKind::InvalidArgument if any count is < 1 or the table would
// not be addressable.
void check_dims(const BehaviorDims& dims);

// Dense table over (r,s,a,b). Used for normalized behaviors and equally for
// unnormalized local models and residual tables, so no probability
// invariants are enforced here.
class Behavior {
 public:
  Behavior() = default;
  explicit Behavior(const BehaviorDims& dims);
  Behavior(const BehaviorDims& dims, std::vector<double> table);

  const BehaviorDims& dims() const { return dims_; }

  static std::size_t offset(const BehaviorDims& d, int r, int s, int a, int b) {
    return ((std::size_t(a) * d.B + b) * d.R + r) * d.S + s;
  }
  std::size_t block_offset(int a, int b) const {
    return (std::size_t(a) * dims_.B + b) * dims_.block_size();
  }

  double operator()(int r, int s, int a, int b) const {
    return table_[offset(dims_, r, s, a, b)];
  }
  double& at(int r, int s, int a, int b) {
    return table_[offset(dims_, r, s, a, b)];
  }

  std::span<const double> block(int a, int b) const {
    return {table_.data() + block_offset(a, b), dims_.block_size()};
  }

  std::span<const double> data() const { return table_; }
  std::span<double> data() { return table_; }

  friend bool operator==(const Behavior&, const Behavior&) = default;

 private:
  BehaviorDims dims_{};
  std::vector<double> table_;
};

// W(a,b) = 1/(A*B) for every setting pair. A single stored scalar, so the
// weights sum to one exactly.
struct MeasurementWeights {
  BehaviorDims dims{};
  double w = 1.0;

  static MeasurementWeights uniform(const BehaviorDims& dims);
};

struct ValidationReport {
  bool normalized = true;
  bool nonnegative = true;
  bool nonsignaling = true;
  double worst_normalization = 0.0;  // max |sum_{r,s} p - 1|
  double worst_negativity = 0.0;     // max(0, -min p)
  double worst_signaling = 0.0;      // max marginal discrepancy, both parties

  bool ok() const { return normalized && nonnegative && nonsignaling; }
};

ValidationReport validate_behavior(const Behavior& P, double tol);

// AB(R-1)(S-1) + A(R-1) + B(S-1)
long long ns_dimension(const BehaviorDims& dims);

// 1/2 * sum (P - rho)^2 W
double functional_value(const Behavior& P, const Behavior& rho,
                        const MeasurementWeights& W);

// g = P - rho, elementwise.
Behavior residual(const Behavior& P, const Behavior& rho);

// sum x*y*W over the whole table.
double weighted_inner(const Behavior& x, const Behavior& y,
                      const MeasurementWeights& W);

void require_same_dims(const BehaviorDims& a, const BehaviorDims& b,
                       const char* where);

}  // namespace localdist
