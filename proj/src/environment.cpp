#include "acts/environment.hpp"

#include <cmath>
#include <string>

#include "acts/error.hpp"

namespace acts {

Vector EnvironmentConfig::resolved_theta() const {
  if (!theta.empty()) {
    return Eigen::Map<const Vector>(theta.data(),
                                    static_cast<Eigen::Index>(theta.size()));
  }
  require(selector.size() == 4 && n_actions >= 1 && n_actions <= 2,
          "default coefficients need 4 interaction features and 1 or 2 actions; "
          "supply theta explicitly otherwise");
  const Eigen::Index k = intercept ? 5 : 4;
  const Eigen::Index lead = intercept ? 1 : 0;
  Vector out = Vector::Zero(k * static_cast<Eigen::Index>(n_actions));
  for (int j = 0; j < 4; ++j) {
    out[lead + j] = kHeartStepsAction1[j];
    if (n_actions == 2) out[k + lead + j] = kHeartStepsAction2[j];
  }
  return out;
}

void EnvironmentConfig::validate() const {
  require(context_dim >= 1, "context_dim must be positive");
  const FeatureMap map = feature_map();
  require(map.min_context_dim() <= context_dim,
          "feature selector reads past context_dim");
  const Vector t = resolved_theta();
  require(static_cast<std::size_t>(t.size()) == map.dim(),
          "theta has " + std::to_string(t.size()) + " entries, feature map needs " +
              std::to_string(map.dim()));
  require(t.allFinite(), "theta must be finite");
  require(std::isfinite(noise_sigma) && noise_sigma >= 0.0,
          "noise_sigma must be nonnegative");
  if (baseline == BaselineKind::kNonstationary ||
      context_process == ContextProcess::kGaussianProcess) {
    require(gp_rho > 0.0 && gp_rho < 1.0, "gp_rho must lie in (0, 1)");
    require(std::isfinite(gp_eta0), "gp_eta0 must be finite");
  }
  require(std::isfinite(nonlinear_threshold) && std::isfinite(nonlinear_amplitude),
          "nonlinear baseline parameters must be finite");
}

Environment::Environment(EnvironmentConfig config)
    : config_(std::move(config)), map_(config_.feature_map()) {
  config_.validate();
  theta_ = config_.resolved_theta();
  const auto L = static_cast<Eigen::Index>(config_.context_dim);
  eta_ = config_.baseline == BaselineKind::kNonstationary
             ? Vector::Constant(L, config_.gp_eta0)
             : Vector();
  if (config_.context_process == ContextProcess::kGaussianProcess) {
    context_state_.assign(config_.context_dim, config_.gp_eta0);
  }
}

std::vector<double> Environment::gen_context(RandomStream& rng) {
  if (config_.context_process == ContextProcess::kIid) {
    std::vector<double> ctx(config_.context_dim);
    for (auto& x : ctx) x = rng.normal();
    return ctx;
  }
  const double rho = config_.gp_rho;
  const double keep = std::sqrt(1.0 - rho * rho);
  for (auto& x : context_state_) x = keep * x + rho * rng.normal();
  return context_state_;
}

double Environment::baseline_reward(std::span<const double> context) const {
  require(context.size() == config_.context_dim, "context dimension mismatch");
  if (config_.baseline == BaselineKind::kNonlinear) {
    return std::abs(context[0]) < config_.nonlinear_threshold
               ? config_.nonlinear_amplitude
               : 0.0;
  }
  double g = 0.0;
  for (std::size_t i = 0; i < context.size(); ++i) {
    g += eta_[static_cast<Eigen::Index>(i)] * context[i];
  }
  return g;
}

void Environment::gp_step(RandomStream& rng) {
  require(config_.baseline == BaselineKind::kNonstationary,
          "gp_step on a stationary baseline");
  Vector noise(eta_.size());
  for (Eigen::Index i = 0; i < noise.size(); ++i) noise[i] = rng.normal();
  gp_step_with(noise);
}

void Environment::gp_step_with(const Vector& noise) {
  require(config_.baseline == BaselineKind::kNonstationary,
          "gp_step on a stationary baseline");
  require(noise.size() == eta_.size(), "gp noise dimension mismatch");
  const double rho = config_.gp_rho;
  eta_ = std::sqrt(1.0 - rho * rho) * eta_ + rho * noise;
}

double Environment::interaction(std::span<const double> context,
                                std::size_t action) const {
  if (action == 0) return 0.0;
  return theta_.dot(map_.features(context, action));
}

double Environment::mean_reward(std::span<const double> context,
                                std::size_t action) const {
  return interaction(context, action) + baseline_reward(context);
}

double Environment::realize_reward(std::span<const double> context,
                                   std::size_t action, RandomStream& rng) const {
  const double noise = rng.normal();
  return mean_reward(context, action) + config_.noise_sigma * noise;
}

OraclePolicy Environment::oracle_policy(std::span<const double> context,
                                        const ProbabilityBounds& bounds) const {
  OraclePolicy o;
  double best = interaction(context, 1);
  for (std::size_t a = 2; a <= map_.n_actions(); ++a) {
    const double value = interaction(context, a);
    if (value > best) {
      best = value;
      o.best_nonzero = a;
    }
  }
  o.a_star = best > 0.0 ? o.best_nonzero : 0;
  o.pi_star = o.a_star != 0 ? bounds.pi_max : bounds.pi_min;
  o.expected_differential = o.pi_star * best;
  return o;
}

double Environment::step_regret(const OraclePolicy& oracle,
                                const Decision& decision,
                                std::span<const double> context) const {
  return oracle.expected_differential -
         decision.pi * interaction(context, decision.candidate_action);
}

}  // namespace acts
