#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "acts/random.hpp"

namespace acts {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Weighted ridge posterior over the treatment-effect coefficients.
//
//   B     = I + sum_t w_t s_t s_t^T
//   b_hat =     sum_t s_t y_t
//   theta_hat = B^{-1} b_hat
//
// For the action-centered update w_t = pi_t (1 - pi_t) and
// y_t = (I(a_t > 0) - pi_t) r_t. The unweighted path (w_t = 1, y_t = r_t) is
// the ordinary linear Thompson sampling posterior used by the benchmark.
//
// The prior penalty is fixed at the identity. B is re-factored (LLT) after
// every update; at the dimensions used here this is cheaper than tracking an
// inverse and keeps theta_hat at full solve accuracy.
class PosteriorState {
 public:
  PosteriorState(std::size_t dim, double v);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(b_hat_.size()); }
  double v() const noexcept { return v_; }
  std::size_t update_count() const noexcept { return update_count_; }
  const Matrix& B() const noexcept { return B_; }
  const Vector& b_hat() const noexcept { return b_hat_; }
  const Vector& theta_hat() const noexcept { return theta_hat_; }

  // Action-centered rank-1 update. Requires pi in (0, 1) and finite inputs;
  // on rejection the state is left untouched.
  void update(const Vector& s, double pi, bool action_nonzero, double reward);

  // B += x x^T, b_hat += x r.
  void update_unweighted(const Vector& x, double reward);

  // One draw from N(theta_hat, v^2 B^{-1}).
  Vector sample_theta(RandomStream& rng) const;

  // sqrt(s^T B^{-1} s).
  double z_width(const Vector& s) const;

  // P(s^T theta > 0) for theta ~ N(theta_hat, v^2 B^{-1}); 0.5 when s = 0.
  double prob_positive(const Vector& s) const;

  // Plain-text checkpoint: d, then B row-major, then b_hat, then v, one
  // whitespace-separated record per line. Doubles are written in shortest
  // round-trip form. update_count is not part of the format and restores
  // as zero.
  std::string snapshot() const;
  static PosteriorState from_snapshot(std::string_view text);

 private:
  void apply(const Vector& s, double weight, double target);
  void check_features(const Vector& s) const;

  Matrix B_;
  Vector b_hat_;
  Vector theta_hat_;
  Eigen::LLT<Matrix> llt_;
  double v_;
  std::size_t update_count_ = 0;
};

}  // namespace acts
