#pragma once

// Independent reference computations used only by the tests. None of these
// call into the incremental code paths they are used to check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace acts::testing {

struct WeightedObservation {
  Eigen::VectorXd s;
  double pi;
  bool nonzero;
  double reward;
};

// argmin_theta sum_t w_t (rhat_t / w_t - theta^T s_t)^2 + |theta|^2 with
// w_t = pi_t (1 - pi_t), rhat_t = (I(a_t > 0) - pi_t) r_t. Solved as the
// stacked least-squares problem [sqrt(W) S; I] theta ~ [rhat / sqrt(W); 0]
// with a Householder QR, never forming the normal equations.
inline Eigen::VectorXd batch_weighted_ridge(const std::vector<WeightedObservation>& obs,
                                            Eigen::Index d) {
  const auto n = static_cast<Eigen::Index>(obs.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n + d, d);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(n + d);
  for (Eigen::Index t = 0; t < n; ++t) {
    const auto& o = obs[static_cast<std::size_t>(t)];
    const double w = o.pi * (1.0 - o.pi);
    const double rhat = ((o.nonzero ? 1.0 : 0.0) - o.pi) * o.reward;
    A.row(t) = std::sqrt(w) * o.s.transpose();
    y[t] = std::sqrt(w) * (rhat / w);
  }
  A.bottomRows(d) = Eigen::MatrixXd::Identity(d, d);
  return A.colPivHouseholderQr().solve(y);
}

// Linear-interpolation quantile (h = (n - 1) p) with order statistics found
// by rank counting rather than sorting.
inline double order_statistic(const std::vector<double>& xs, std::size_t k) {
  for (std::size_t i = 0; i < xs.size(); ++i) {
    std::size_t below = 0, equal = 0;
    for (double y : xs) {
      if (y < xs[i]) ++below;
      if (y == xs[i]) ++equal;
    }
    if (below <= k && k < below + equal) return xs[i];
  }
  return xs.back();
}

inline double quantile_by_rank(const std::vector<double>& xs, double p) {
  const double h = (static_cast<double>(xs.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, xs.size() - 1);
  const double a = order_statistic(xs, lo);
  const double b = order_statistic(xs, hi);
  return a + (h - static_cast<double>(lo)) * (b - a);
}

// Best expected differential reward over a grid of feasible policies: one
// candidate arm, probability pi in [pi_min, pi_max] (grid plus endpoints).
inline double best_feasible_differential(const std::vector<double>& arm_values,
                                         double pi_min, double pi_max,
                                         std::size_t grid = 64) {
  double best = -1e300;
  for (double value : arm_values) {
    for (std::size_t g = 0; g <= grid; ++g) {
      const double pi = pi_min + (pi_max - pi_min) * static_cast<double>(g) /
                                     static_cast<double>(grid);
      best = std::max(best, pi * value);
    }
  }
  return best;
}

}  // namespace acts::testing
