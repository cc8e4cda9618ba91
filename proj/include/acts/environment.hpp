#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "acts/policy.hpp"
#include "acts/posterior.hpp"
#include "acts/random.hpp"

namespace acts {

enum class BaselineKind { kNonlinear, kNonstationary };

// iid N(0, I) contexts, or contexts following the same AR(1) recursion as
// the baseline coefficients (started at gp_eta0 * 1_L).
enum class ContextProcess { kIid, kGaussianProcess };

// Treatment-effect coefficients fitted on HeartSteps (action 1) and the
// sign-flipped location variant (action 2). Feature order: number of
// messages sent, location indicator 1, location indicator 2, step count
// variability.
inline constexpr double kHeartStepsAction1[4] = {0.116, -0.275, -0.233, 0.0425};
inline constexpr double kHeartStepsAction2[4] = {0.116, 0.275, -0.233, 0.0425};

struct EnvironmentConfig {
  BaselineKind baseline = BaselineKind::kNonlinear;
  std::size_t context_dim = 7;
  std::size_t n_actions = 2;
  std::vector<std::size_t> selector = {0, 1, 2, 3};
  // Prepend a constant 1 to every action block.
  bool intercept = false;
  // Empty means the HeartSteps table (requires n_actions <= 2 and four
  // selected features); the intercept coefficient, if any, is 0.
  std::vector<double> theta;
  ContextProcess context_process = ContextProcess::kIid;
  double noise_sigma = 1.0;
  double gp_rho = 0.1;
  double gp_eta0 = 1.0;
  double nonlinear_threshold = 0.8;
  double nonlinear_amplitude = 2.0;

  FeatureMap feature_map() const { return FeatureMap(n_actions, selector, intercept); }
  Vector resolved_theta() const;
  void validate() const;
};

// Constrained-optimal policy at one context.
struct OraclePolicy {
  std::size_t a_star = 0;        // 0 or best_nonzero
  double pi_star = 0.0;          // probability on best_nonzero
  std::size_t best_nonzero = 1;  // argmax over 1..N of s^T theta
  double expected_differential = 0.0;
};

// Reward model r_t(a) = theta^T s_{t,a} I(a > 0) + g_t(context) + sigma n_t.
// Nonstationary baselines carry eta_t, advanced by gp_step().
class Environment {
 public:
  explicit Environment(EnvironmentConfig config);

  const EnvironmentConfig& config() const noexcept { return config_; }
  const FeatureMap& feature_map() const noexcept { return map_; }
  const Vector& theta() const noexcept { return theta_; }
  const Vector& gp_state() const noexcept { return eta_; }

  // Next context: an iid N(0, I_L) draw, or one AR(1) step of the context
  // process.
  std::vector<double> gen_context(RandomStream& rng);

  double baseline_reward(std::span<const double> context) const;

  // eta <- sqrt(1 - rho^2) eta + rho n, n ~ N(0, I_L).
  void gp_step(RandomStream& rng);
  void gp_step_with(const Vector& noise);

  // theta^T s_{t,a} for a >= 1, exactly 0 for a = 0.
  double interaction(std::span<const double> context, std::size_t action) const;

  double mean_reward(std::span<const double> context, std::size_t action) const;
  double realize_reward(std::span<const double> context, std::size_t action,
                        RandomStream& rng) const;

  OraclePolicy oracle_policy(std::span<const double> context,
                             const ProbabilityBounds& bounds) const;

  // pi*_t s_{t,a*}^T theta - pi_t s_{t,cand}^T theta.
  double step_regret(const OraclePolicy& oracle, const Decision& decision,
                     std::span<const double> context) const;

 private:
  EnvironmentConfig config_;
  FeatureMap map_;
  Vector theta_;
  Vector eta_;
  std::vector<double> context_state_;
};

}  // namespace acts
