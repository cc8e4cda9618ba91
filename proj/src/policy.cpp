#include "acts/policy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "acts/error.hpp"
#include "acts/normal.hpp"

namespace acts {

namespace {

// Argmax of features[i]^T theta over [first, size); lowest index wins ties.
std::size_t argmax_value(std::span<const Vector> features, std::size_t first,
                         const Vector& theta) {
  std::size_t best = first;
  double best_value = features[first].dot(theta);
  for (std::size_t i = first + 1; i < features.size(); ++i) {
    const double value = features[i].dot(theta);
    if (value > best_value) {
      best_value = value;
      best = i;
    }
  }
  return best;
}

void check_dims(const PosteriorState& state, std::span<const Vector> features) {
  for (const auto& f : features) {
    require(static_cast<std::size_t>(f.size()) == state.dim(),
            "feature dimension does not match posterior dimension");
  }
}

std::size_t randomize(std::size_t candidate, double pi, RandomStream& rng) {
  return rng.uniform() < pi ? candidate : 0;
}

}  // namespace

void ProbabilityBounds::validate() const {
  require(pi_min > 0.0 && pi_min <= pi_max && pi_max < 1.0,
          "probability bounds must satisfy 0 < pi_min <= pi_max < 1");
}

double clip_probability(double p, const ProbabilityBounds& bounds) {
  return std::max(bounds.pi_min, std::min(bounds.pi_max, p));
}

FeatureMap::FeatureMap(std::size_t n_actions, std::vector<std::size_t> selector,
                       bool intercept)
    : n_actions_(n_actions), selector_(std::move(selector)), intercept_(intercept) {
  require(n_actions_ >= 1, "feature map needs at least one nonzero action");
  require(!selector_.empty(), "feature map selector is empty");
}

std::size_t FeatureMap::min_context_dim() const noexcept {
  return *std::max_element(selector_.begin(), selector_.end()) + 1;
}

Vector FeatureMap::features(std::span<const double> context,
                            std::size_t action) const {
  require(action >= 1 && action <= n_actions_,
          "action " + std::to_string(action) + " outside 1.." +
              std::to_string(n_actions_));
  require(context.size() >= min_context_dim(),
          "context of length " + std::to_string(context.size()) +
              " too short for feature selector");
  Vector out = Vector::Zero(static_cast<Eigen::Index>(dim()));
  auto pos = static_cast<Eigen::Index>((action - 1) * per_action_dim());
  if (intercept_) out[pos++] = 1.0;
  for (std::size_t idx : selector_) out[pos++] = context[idx];
  return out;
}

std::vector<Vector> FeatureMap::all_actions(std::span<const double> context) const {
  std::vector<Vector> out;
  out.reserve(n_actions_);
  for (std::size_t a = 1; a <= n_actions_; ++a) out.push_back(features(context, a));
  return out;
}

Decision choose_action_centered(const PosteriorState& state,
                                std::span<const Vector> features,
                                const ProbabilityBounds& bounds,
                                RandomStream& rng) {
  require(!features.empty(), "empty action set");
  const Vector theta_prime = state.sample_theta(rng);
  return choose_action_centered_with(state, features, bounds, theta_prime, rng);
}

Decision choose_action_centered_with(const PosteriorState& state,
                                     std::span<const Vector> features,
                                     const ProbabilityBounds& bounds,
                                     const Vector& theta_prime,
                                     RandomStream& rng) {
  require(!features.empty(), "empty action set");
  check_dims(state, features);
  Decision d;
  const std::size_t idx = argmax_value(features, 0, theta_prime);
  d.candidate_action = idx + 1;
  d.candidate_features = features[idx];
  d.pi = clip_probability(state.prob_positive(d.candidate_features), bounds);
  d.realized_action = randomize(d.candidate_action, d.pi, rng);
  return d;
}

void observe_action_centered(PosteriorState& state, const Decision& decision,
                             double reward) {
  state.update(decision.candidate_features, decision.pi,
               decision.realized_action > 0, reward);
}

Decision choose_benchmark(const PosteriorState& state,
                          std::span<const Vector> features,
                          const ProbabilityBounds& bounds, RandomStream& rng) {
  require(features.size() >= 2, "benchmark needs action 0 and a nonzero action");
  const Vector theta_prime = state.sample_theta(rng);
  return choose_benchmark_with(state, features, bounds, theta_prime, rng);
}

Decision choose_benchmark_with(const PosteriorState& state,
                               std::span<const Vector> features,
                               const ProbabilityBounds& bounds,
                               const Vector& theta_prime, RandomStream& rng) {
  require(features.size() >= 2, "benchmark needs action 0 and a nonzero action");
  check_dims(state, features);
  Decision d;
  d.candidate_action = argmax_value(features, 1, theta_prime);
  d.candidate_features = features[d.candidate_action];
  const Vector diff = d.candidate_features - features[0];
  d.pi = clip_probability(state.prob_positive(diff), bounds);
  d.realized_action = randomize(d.candidate_action, d.pi, rng);
  return d;
}

void observe_benchmark(PosteriorState& state, const Decision&, double reward,
                       const Vector& realized_features) {
  state.update_unweighted(realized_features, reward);
}

ActionCenteredBandit::ActionCenteredBandit(FeatureMap map,
                                           ProbabilityBounds bounds, double v)
    : map_(std::move(map)), bounds_(bounds), state_(map_.dim(), v) {
  bounds_.validate();
}

Decision ActionCenteredBandit::decide(std::span<const double> context,
                                      RandomStream& rng) {
  const auto features = map_.all_actions(context);
  return choose_action_centered(state_, features, bounds_, rng);
}

void ActionCenteredBandit::observe(const Decision& decision,
                                   std::span<const double>, double reward) {
  observe_action_centered(state_, decision, reward);
}

double ActionCenteredBandit::z_width(const Decision& decision) const {
  return state_.z_width(decision.candidate_features);
}

BenchmarkBandit::BenchmarkBandit(FeatureMap map, std::size_t context_dim,
                                 ProbabilityBounds bounds, double v,
                                 BenchmarkBaseline baseline)
    : map_(std::move(map)),
      context_dim_(context_dim),
      baseline_(baseline),
      bounds_(bounds),
      state_((baseline == BenchmarkBaseline::kContext ? context_dim : 0) + map_.dim(), v) {
  bounds_.validate();
  require(context_dim_ >= map_.min_context_dim(),
          "context dimension too small for feature selector");
}

Vector BenchmarkBandit::features(std::span<const double> context,
                                 std::size_t action) const {
  require(context.size() == context_dim_, "context dimension mismatch");
  Vector x = Vector::Zero(static_cast<Eigen::Index>(state_.dim()));
  if (baseline_ == BenchmarkBaseline::kContext) {
    for (std::size_t i = 0; i < context_dim_; ++i) {
      x[static_cast<Eigen::Index>(i)] = context[i];
    }
  }
  if (action > 0) {
    x.tail(static_cast<Eigen::Index>(map_.dim())) = map_.features(context, action);
  }
  return x;
}

Decision BenchmarkBandit::decide(std::span<const double> context,
                                 RandomStream& rng) {
  std::vector<Vector> xs;
  xs.reserve(map_.n_actions() + 1);
  for (std::size_t a = 0; a <= map_.n_actions(); ++a) {
    xs.push_back(features(context, a));
  }
  return choose_benchmark(state_, xs, bounds_, rng);
}

void BenchmarkBandit::observe(const Decision& decision,
                              std::span<const double> context, double reward) {
  observe_benchmark(state_, decision, reward,
                    features(context, decision.realized_action));
}

double BenchmarkBandit::z_width(const Decision& decision) const {
  return state_.z_width(decision.candidate_features);
}

}  // namespace acts
