#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "localdist/error.hpp"
#include "localdist/solver.hpp"

namespace localdist {

std::vector<StrategyPair> all_strategies(const BehaviorDims& dims,
                                         std::uint64_t cap) {
  check_dims(dims);
  std::uint64_t count = 1;
  auto grow = [&](int base, int times) {
    for (int i = 0; i < times; ++i) {
      if (count > cap / std::uint64_t(base))
        fail(ErrorKind::CapExceeded,
             "vertex enumeration exceeds cap " + std::to_string(cap));
      count *= std::uint64_t(base);
    }
  };
  grow(dims.R, dims.A);
  grow(dims.S, dims.B);

  std::vector<StrategyPair> out;
  out.reserve(count);
  StrategyPair sp{std::vector<int>(dims.A, 0), std::vector<int>(dims.B, 0)};
  for (std::uint64_t i = 0; i < count; ++i) {
    out.push_back(sp);
    // Odometer over (r, s) with s varying fastest.
    int k = dims.B - 1;
    for (; k >= 0; --k) {
      if (++sp.s[k] < dims.S) break;
      sp.s[k] = 0;
    }
    if (k >= 0) continue;
    for (int a = dims.A - 1; a >= 0; --a) {
      if (++sp.r[a] < dims.R) break;
      sp.r[a] = 0;
    }
  }
  return out;
}

namespace {

// Unconstrained weighted least squares on the columns in `cols`.
Eigen::VectorXd subset_lsq(const Behavior& P, const std::vector<VertexOffsets>& v,
                           const std::vector<int>& cols, double sqrt_w) {
  const auto n = Eigen::Index(P.data().size());
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, Eigen::Index(cols.size()));
  std::vector<double> column(P.data().size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    std::fill(column.begin(), column.end(), 0.0);
    v[cols[j]].scatter(column, sqrt_w);
    for (Eigen::Index i = 0; i < n; ++i) M(i, Eigen::Index(j)) = column[i];
  }
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) rhs(i) = P.data()[i] * sqrt_w;
  return M.colPivHouseholderQr().solve(rhs);
}

}  // namespace

std::vector<double> nnls_weights(const Behavior& P,
                                 const std::vector<StrategyPair>& vertices) {
  const auto& dims = P.dims();
  const auto W = MeasurementWeights::uniform(dims);
  const double sqrt_w = std::sqrt(W.w);
  const std::size_t N = vertices.size();

  std::vector<VertexOffsets> v;
  v.reserve(N);
  for (const auto& sp : vertices) {
    check_strategy(sp, dims);
    v.emplace_back(sp, dims);
  }

  std::vector<double> x(N, 0.0);
  std::vector<char> passive(N, 0);
  std::vector<double> rho(P.data().size(), 0.0);
  std::vector<double> g(P.data().size());
  const double tol = 1e-13;

  // Lawson-Hanson active set method.
  const std::size_t outer_cap = 3 * N + 10;
  for (std::size_t outer = 0; outer < outer_cap; ++outer) {
    std::fill(rho.begin(), rho.end(), 0.0);
    for (std::size_t k = 0; k < N; ++k)
      if (x[k] > 0.0) v[k].scatter(rho, x[k]);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = P.data()[i] - rho[i];

    std::vector<char> rejected(N, 0);
    bool entered = false;
    while (!entered) {
      std::size_t j = N;
      double best = tol;
      for (std::size_t k = 0; k < N; ++k) {
        if (passive[k] || rejected[k]) continue;
        const double wk = v[k].gather(g) * W.w;
        if (wk > best) {
          best = wk;
          j = k;
        }
      }
      if (j == N) return x;  // KKT conditions hold

      passive[j] = 1;
      std::vector<int> cols;
      for (std::size_t k = 0; k < N; ++k)
        if (passive[k]) cols.push_back(int(k));
      Eigen::VectorXd z = subset_lsq(P, v, cols, sqrt_w);
      auto pos_of_j = std::find(cols.begin(), cols.end(), int(j)) - cols.begin();
      if (z(pos_of_j) <= 0.0) {
        // Numerically dependent column: skip it for this round.
        passive[j] = 0;
        rejected[j] = 1;
        continue;
      }
      entered = true;

      for (;;) {
        bool feasible = true;
        for (Eigen::Index i = 0; i < z.size(); ++i)
          if (z(i) <= 0.0) feasible = false;
        if (feasible) {
          for (std::size_t i = 0; i < cols.size(); ++i) x[cols[i]] = z(Eigen::Index(i));
          break;
        }
        double step = 1.0;
        for (std::size_t i = 0; i < cols.size(); ++i) {
          const double zi = z(Eigen::Index(i));
          if (zi <= 0.0) {
            const double xi = x[cols[i]];
            step = std::min(step, xi / (xi - zi));
          }
        }
        for (std::size_t i = 0; i < cols.size(); ++i) {
          double& xi = x[cols[i]];
          xi += step * (z(Eigen::Index(i)) - xi);
          if (xi <= 1e-15) {
            xi = 0.0;
            passive[cols[i]] = 0;
          }
        }
        cols.clear();
        for (std::size_t k = 0; k < N; ++k)
          if (passive[k]) cols.push_back(int(k));
        if (cols.empty()) break;
        z = subset_lsq(P, v, cols, sqrt_w);
      }
    }
  }
  return x;
}

double reference_distance(const Behavior& P, std::uint64_t cap) {
  const auto verts = all_strategies(P.dims(), cap);
  const auto x = nnls_weights(P, verts);
  WeightedVertexSet chi(P.dims());
  for (std::size_t k = 0; k < verts.size(); ++k)
    if (x[k] > 0.0) chi.add(verts[k], x[k]);
  const auto W = MeasurementWeights::uniform(P.dims());
  if (chi.empty()) return functional_value(P, Behavior(P.dims()), W);
  return functional_value(P, local_mixture(chi), W);
}

}  // namespace localdist
