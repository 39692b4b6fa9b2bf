#include "localdist/quantum.hpp"

#include <cmath>
#include <numbers>

#include "localdist/error.hpp"
#include "localdist/geometry.hpp"

namespace localdist {

TwoQubitState TwoQubitState::pure(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0))
    fail(ErrorKind::InvalidArgument, "pure state gamma must lie in [0,1]");
  return {Kind::Pure, gamma};
}

TwoQubitState TwoQubitState::werner(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    fail(ErrorKind::InvalidArgument, "Werner visibility must lie in [0,1]");
  return {Kind::Werner, p};
}

MeasurementFamily planar_family(int M, Plane plane, double offset) {
  if (M < 1) fail(ErrorKind::InvalidArgument, "planar family needs M >= 1");
  MeasurementFamily f;
  f.plane = plane;
  f.angles.resize(M);
  for (int k = 0; k < M; ++k) f.angles[k] = k * std::numbers::pi / M + offset;
  return f;
}

double chained_offset(int M) {
  if (M < 1) fail(ErrorKind::InvalidArgument, "planar family needs M >= 1");
  return std::numbers::pi / (2.0 * M);
}

std::vector<double> bloch_direction(double theta, Plane plane) {
  const double c = std::cos(theta), s = std::sin(theta);
  if (plane == Plane::XY) return {c, s, 0.0};
  return {c, 0.0, s};
}

Behavior qubit_behavior(const TwoQubitState& state, const MeasurementFamily& alice,
                        const MeasurementFamily& bob) {
  if (alice.angles.empty() || bob.angles.empty())
    fail(ErrorKind::InvalidArgument, "measurement family is empty");
  const BehaviorDims dims{int(alice.angles.size()), int(bob.angles.size()), 2, 2};
  check_dims(dims);

  double c = 0.0;
  double T[3] = {0.0, 0.0, 0.0};  // diagonal correlation matrix
  if (state.kind == TwoQubitState::Kind::Pure) {
    const double g = state.param;
    const double n2 = 1.0 + g * g;
    c = (1.0 - g * g) / n2;
    T[0] = 2.0 * g / n2;
    T[1] = -2.0 * g / n2;
    T[2] = 1.0;
  } else {
    T[0] = T[1] = T[2] = -state.param;
  }

  Behavior P(dims);
  for (int a = 0; a < dims.A; ++a) {
    const auto u = bloch_direction(alice.angles[a], alice.plane);
    const double m = c * u[2];
    for (int b = 0; b < dims.B; ++b) {
      const auto v = bloch_direction(bob.angles[b], bob.plane);
      const double n = c * v[2];
      const double K = u[0] * T[0] * v[0] + u[1] * T[1] * v[1] + u[2] * T[2] * v[2];
      for (int r = 0; r < 2; ++r) {
        const double rh = r == 0 ? 1.0 : -1.0;
        for (int s = 0; s < 2; ++s) {
          const double sh = s == 0 ? 1.0 : -1.0;
          P.at(r, s, a, b) = 0.25 * (1.0 + rh * m + sh * n + rh * sh * K);
        }
      }
    }
  }
  return P;
}

Behavior pr_box() {
  const BehaviorDims dims{2, 2, 2, 2};
  Behavior P(dims);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int r = 0; r < 2; ++r)
        for (int s = 0; s < 2; ++s) P.at(r, s, a, b) = (r ^ s) == (a & b) ? 0.5 : 0.0;
  return P;
}

Behavior uniform_behavior(const BehaviorDims& dims) {
  check_dims(dims);
  Behavior P(dims);
  const double v = 1.0 / double(dims.block_size());
  for (double& x : P.data()) x = v;
  return P;
}

Behavior random_local_mixture(const BehaviorDims& dims, int k, std::mt19937_64& rng) {
  check_dims(dims);
  if (k < 1) fail(ErrorKind::InvalidArgument, "local mixture needs k >= 1");
  std::uniform_int_distribution<int> ra(0, dims.R - 1), sb(0, dims.S - 1);
  std::exponential_distribution<double> expo(1.0);

  std::vector<StrategyPair> picks(k);
  std::vector<double> w(k);
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    picks[i].r.resize(dims.A);
    picks[i].s.resize(dims.B);
    for (int& x : picks[i].r) x = ra(rng);
    for (int& x : picks[i].s) x = sb(rng);
    w[i] = expo(rng);
    total += w[i];
  }

  Behavior P(dims);
  auto t = P.data();
  for (int i = 0; i < k; ++i) VertexOffsets(picks[i], dims).scatter(t, w[i] / total);
  return P;
}

}  // namespace localdist
