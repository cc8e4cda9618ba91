#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "acts/posterior.hpp"
#include "acts/random.hpp"

namespace acts {

// Allowed range for P(a_t > 0): 0 < pi_min <= pi_max < 1.
struct ProbabilityBounds {
  double pi_min = 0.2;
  double pi_max = 0.8;

  void validate() const;
};

double clip_probability(double p, const ProbabilityBounds& bounds);

// Stacked-indicator interaction features. For action a in 1..N the output
// has the selected context components in block a-1 and zeros elsewhere, so
// dim() = N * K with K = selector.size() (+1 when each block leads with a
// constant 1 intercept).
class FeatureMap {
 public:
  FeatureMap(std::size_t n_actions, std::vector<std::size_t> selector,
             bool intercept = false);

  std::size_t n_actions() const noexcept { return n_actions_; }
  std::size_t per_action_dim() const noexcept {
    return selector_.size() + (intercept_ ? 1 : 0);
  }
  std::size_t dim() const noexcept { return n_actions_ * per_action_dim(); }
  const std::vector<std::size_t>& selector() const noexcept { return selector_; }
  bool intercept() const noexcept { return intercept_; }

  // Smallest context length the selector can read from.
  std::size_t min_context_dim() const noexcept;

  Vector features(std::span<const double> context, std::size_t action) const;

  // Features for actions 1..N, in order (element 0 is action 1).
  std::vector<Vector> all_actions(std::span<const double> context) const;

 private:
  std::size_t n_actions_;
  std::vector<std::size_t> selector_;
  bool intercept_;
};

struct Decision {
  std::size_t candidate_action = 1;  // in 1..N
  double pi = 0.5;                   // P(a_t > 0), clipped
  std::size_t realized_action = 0;   // 0 or candidate_action
  Vector candidate_features;
};

// Action-centered Thompson sampling step. features[i] holds s_{t,i+1}.
// Draws theta' ~ N(theta_hat, v^2 B^{-1}), picks the argmax nonzero action
// (lowest index on ties), clips the closed-form P(s^T theta > 0) into the
// bounds and randomizes between the candidate and action 0.
Decision choose_action_centered(const PosteriorState& state,
                                std::span<const Vector> features,
                                const ProbabilityBounds& bounds,
                                RandomStream& rng);

// As above with theta' supplied by the caller; rng only drives the
// send/don't-send draw.
Decision choose_action_centered_with(const PosteriorState& state,
                                     std::span<const Vector> features,
                                     const ProbabilityBounds& bounds,
                                     const Vector& theta_prime,
                                     RandomStream& rng);

void observe_action_centered(PosteriorState& state, const Decision& decision,
                             double reward);

// Benchmark linear Thompson sampling under the same probability constraint.
// features[a] holds x_{t,a} for a in 0..N (action 0 included). pi is the
// clipped CDF of the posterior on (x_{t,cand} - x_{t,0}).
Decision choose_benchmark(const PosteriorState& state,
                          std::span<const Vector> features,
                          const ProbabilityBounds& bounds, RandomStream& rng);

Decision choose_benchmark_with(const PosteriorState& state,
                               std::span<const Vector> features,
                               const ProbabilityBounds& bounds,
                               const Vector& theta_prime, RandomStream& rng);

void observe_benchmark(PosteriorState& state, const Decision& decision,
                       double reward, const Vector& realized_features);

// A bandit instance bound to its feature construction. Consumed by the
// experiment runner and the replay evaluator.
class Bandit {
 public:
  virtual ~Bandit() = default;

  virtual Decision decide(std::span<const double> context,
                          RandomStream& rng) = 0;
  virtual void observe(const Decision& decision,
                       std::span<const double> context, double reward) = 0;

  // Posterior width of the decision's candidate features (before observing).
  virtual double z_width(const Decision& decision) const = 0;

  virtual const PosteriorState& posterior() const = 0;
  virtual std::size_t n_actions() const = 0;
};

class ActionCenteredBandit final : public Bandit {
 public:
  ActionCenteredBandit(FeatureMap map, ProbabilityBounds bounds, double v);

  Decision decide(std::span<const double> context, RandomStream& rng) override;
  void observe(const Decision& decision, std::span<const double> context,
               double reward) override;
  double z_width(const Decision& decision) const override;
  const PosteriorState& posterior() const override { return state_; }
  std::size_t n_actions() const override { return map_.n_actions(); }

 private:
  FeatureMap map_;
  ProbabilityBounds bounds_;
  PosteriorState state_;
};

// What the benchmark uses to model the reward of action 0.
enum class BenchmarkBaseline {
  kContext,  // raw context block shared by every action
  kNone,     // no baseline block: x_{t,0} = 0, action-0 rewards carry no signal
};

// x_{t,a} = [baseline block ; s_{t,a} I(a > 0)]: ordinary linear Thompson
// sampling on the whole reward.
class BenchmarkBandit final : public Bandit {
 public:
  BenchmarkBandit(FeatureMap map, std::size_t context_dim,
                  ProbabilityBounds bounds, double v,
                  BenchmarkBaseline baseline = BenchmarkBaseline::kContext);

  Vector features(std::span<const double> context, std::size_t action) const;

  Decision decide(std::span<const double> context, RandomStream& rng) override;
  void observe(const Decision& decision, std::span<const double> context,
               double reward) override;
  double z_width(const Decision& decision) const override;
  const PosteriorState& posterior() const override { return state_; }
  std::size_t n_actions() const override { return map_.n_actions(); }

 private:
  FeatureMap map_;
  std::size_t context_dim_;
  BenchmarkBaseline baseline_;
  ProbabilityBounds bounds_;
  PosteriorState state_;
};

}  // namespace acts
