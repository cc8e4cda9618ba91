#include "acts/acts.h"

#include <cstring>
#include <memory>
#include <new>
#include <span>
#include <string>
#include <vector>

#include "acts/commands.hpp"
#include "acts/environment.hpp"
#include "acts/error.hpp"
#include "acts/experiment.hpp"
#include "acts/normal.hpp"
#include "acts/policy.hpp"
#include "acts/posterior.hpp"

struct acts_posterior {
  acts::PosteriorState state;
};

struct acts_bandit {
  acts::ExperimentConfig config;
  std::unique_ptr<acts::Bandit> bandit;
  acts::RandomStream rng;
  acts::Decision last;
  bool has_last = false;
};

struct acts_environment {
  acts::Environment env;
  acts::RandomStream rng;
};

namespace {

thread_local std::string last_error;

acts_status to_status(acts::ErrorCode code) {
  switch (code) {
    case acts::ErrorCode::kInvalidArgument: return ACTS_ERR_INVALID_ARGUMENT;
    case acts::ErrorCode::kParse: return ACTS_ERR_PARSE;
    case acts::ErrorCode::kIo: return ACTS_ERR_IO;
    case acts::ErrorCode::kState: return ACTS_ERR_STATE;
  }
  return ACTS_ERR_INTERNAL;
}

acts_status set_error(acts_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

template <typename F>
acts_status guarded(F&& body) {
  try {
    last_error.clear();
    body();
    return ACTS_OK;
  } catch (const acts::Error& e) {
    return set_error(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(ACTS_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(ACTS_ERR_INTERNAL, e.what());
  }
}

void need(bool ok, const char* what) {
  if (!ok) acts::fail(acts::ErrorCode::kInvalidArgument, what);
}

acts::Vector to_vector(const double* data, std::size_t n) {
  need(data != nullptr || n == 0, "null vector");
  return acts::Vector(Eigen::Map<const acts::Vector>(data, static_cast<Eigen::Index>(n)));
}

void copy_out(const acts::Vector& v, double* out, std::size_t n) {
  need(out != nullptr, "null output buffer");
  need(n == static_cast<std::size_t>(v.size()), "output length does not match dimension");
  std::memcpy(out, v.data(), n * sizeof(double));
}

acts_status write_text(const std::string& text, char* buf, size_t cap, size_t* needed) {
  if (needed) *needed = text.size() + 1;
  if (cap < text.size() + 1) {
    return set_error(ACTS_ERR_BUFFER_TOO_SMALL,
                     "buffer of " + std::to_string(cap) + " bytes, need " +
                         std::to_string(text.size() + 1));
  }
  std::memcpy(buf, text.c_str(), text.size() + 1);
  return ACTS_OK;
}

template <typename F>
acts_status text_result(char* buf, size_t cap, size_t* needed, F&& produce) {
  std::string text;
  const acts_status st = guarded([&] { text = produce(); });
  if (st != ACTS_OK) return st;
  return write_text(text, buf, cap, needed);
}

std::span<const double> context_span(const double* context, std::size_t n) {
  need(context != nullptr || n == 0, "null context");
  return {context, n};
}

}  // namespace

extern "C" {

const char* acts_version(void) { return "0.1.0"; }

const char* acts_last_error(void) { return last_error.c_str(); }

const char* acts_status_name(acts_status status) {
  switch (status) {
    case ACTS_OK: return "ok";
    case ACTS_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case ACTS_ERR_PARSE: return "parse";
    case ACTS_ERR_IO: return "io";
    case ACTS_ERR_STATE: return "state";
    case ACTS_ERR_BUFFER_TOO_SMALL: return "buffer_too_small";
    case ACTS_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

acts_status acts_posterior_new(size_t dim, double v, acts_posterior** out) {
  return guarded([&] {
    need(out != nullptr, "null output handle");
    *out = new acts_posterior{acts::PosteriorState(dim, v)};
  });
}

void acts_posterior_free(acts_posterior* p) { delete p; }

size_t acts_posterior_dim(const acts_posterior* p) { return p ? p->state.dim() : 0; }

acts_status acts_posterior_update(acts_posterior* p, const double* s, size_t n, double pi,
                                  int action_nonzero, double reward) {
  return guarded([&] {
    need(p != nullptr, "null posterior");
    p->state.update(to_vector(s, n), pi, action_nonzero != 0, reward);
  });
}

acts_status acts_posterior_update_unweighted(acts_posterior* p, const double* x, size_t n,
                                             double reward) {
  return guarded([&] {
    need(p != nullptr, "null posterior");
    p->state.update_unweighted(to_vector(x, n), reward);
  });
}

acts_status acts_posterior_theta_hat(const acts_posterior* p, double* out, size_t n) {
  return guarded([&] {
    need(p != nullptr, "null posterior");
    copy_out(p->state.theta_hat(), out, n);
  });
}

acts_status acts_posterior_B(const acts_posterior* p, double* out, size_t n) {
  return guarded([&] {
    need(p != nullptr, "null posterior");
    const auto d = p->state.dim();
    need(out != nullptr && n == d * d, "output length must be dim*dim");
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        out[i * d + j] = p->state.B()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  });
}

acts_status acts_posterior_sample(const acts_posterior* p, uint64_t seed, double* out,
                                  size_t n) {
  return guarded([&] {
    need(p != nullptr, "null posterior");
    acts::RandomStream rng(seed);
    copy_out(p->state.sample_theta(rng), out, n);
  });
}

acts_status acts_posterior_z_width(const acts_posterior* p, const double* s, size_t n,
                                   double* out) {
  return guarded([&] {
    need(p != nullptr && out != nullptr, "null argument");
    *out = p->state.z_width(to_vector(s, n));
  });
}

acts_status acts_posterior_prob_positive(const acts_posterior* p, const double* s, size_t n,
                                         double* out) {
  return guarded([&] {
    need(p != nullptr && out != nullptr, "null argument");
    *out = p->state.prob_positive(to_vector(s, n));
  });
}

acts_status acts_posterior_snapshot(const acts_posterior* p, char* buf, size_t cap,
                                    size_t* needed) {
  return text_result(buf, cap, needed, [&] {
    need(p != nullptr, "null posterior");
    return p->state.snapshot();
  });
}

acts_status acts_posterior_restore(const char* text, acts_posterior** out) {
  return guarded([&] {
    need(text != nullptr && out != nullptr, "null argument");
    *out = new acts_posterior{acts::PosteriorState::from_snapshot(text)};
  });
}

acts_status acts_bandit_new(const char* config_json, uint64_t seed, acts_bandit** out) {
  return guarded([&] {
    need(config_json != nullptr && out != nullptr, "null argument");
    acts::ExperimentConfig cfg = acts::config_from_json(config_json);
    auto bandit = acts::make_bandit(cfg);
    *out = new acts_bandit{std::move(cfg), std::move(bandit), acts::RandomStream(seed), {}, false};
  });
}

void acts_bandit_free(acts_bandit* b) { delete b; }

acts_status acts_bandit_decide(acts_bandit* b, const double* context, size_t n,
                               acts_decision* out) {
  return guarded([&] {
    need(b != nullptr && out != nullptr, "null argument");
    need(n == b->config.environment.context_dim, "context length does not match context_dim");
    b->last = b->bandit->decide(context_span(context, n), b->rng);
    b->has_last = true;
    *out = {b->last.candidate_action, b->last.pi, b->last.realized_action};
  });
}

acts_status acts_bandit_observe(acts_bandit* b, const acts_decision* decision,
                                const double* context, size_t n, double reward) {
  return guarded([&] {
    need(b != nullptr && decision != nullptr, "null argument");
    need(n == b->config.environment.context_dim, "context length does not match context_dim");
    if (!b->has_last || b->last.candidate_action != decision->candidate_action ||
        b->last.pi != decision->pi || b->last.realized_action != decision->realized_action) {
      acts::fail(acts::ErrorCode::kState, "observe does not match the pending decision");
    }
    b->bandit->observe(b->last, context_span(context, n), reward);
    b->has_last = false;
  });
}

acts_status acts_bandit_snapshot(const acts_bandit* b, char* buf, size_t cap, size_t* needed) {
  return text_result(buf, cap, needed, [&] {
    need(b != nullptr, "null bandit");
    return b->bandit->posterior().snapshot();
  });
}

acts_status acts_environment_new(const char* config_json, uint64_t seed,
                                 acts_environment** out) {
  return guarded([&] {
    need(config_json != nullptr && out != nullptr, "null argument");
    const acts::ExperimentConfig cfg = acts::config_from_json(config_json);
    *out = new acts_environment{acts::Environment(cfg.environment), acts::RandomStream(seed)};
  });
}

void acts_environment_free(acts_environment* e) { delete e; }

size_t acts_environment_context_dim(const acts_environment* e) {
  return e ? e->env.config().context_dim : 0;
}

acts_status acts_environment_step(acts_environment* e, double* context, size_t n) {
  return guarded([&] {
    need(e != nullptr && context != nullptr, "null argument");
    need(n == e->env.config().context_dim, "context length does not match context_dim");
    if (e->env.config().baseline == acts::BaselineKind::kNonstationary) e->env.gp_step(e->rng);
    const auto ctx = e->env.gen_context(e->rng);
    std::memcpy(context, ctx.data(), n * sizeof(double));
  });
}

acts_status acts_environment_reward(acts_environment* e, const double* context, size_t n,
                                    size_t action, double* out) {
  return guarded([&] {
    need(e != nullptr && out != nullptr, "null argument");
    need(action <= e->env.feature_map().n_actions(), "action out of range");
    *out = e->env.realize_reward(context_span(context, n), action, e->rng);
  });
}

acts_status acts_environment_oracle(const acts_environment* e, const double* context,
                                    size_t n, double pi_min, double pi_max, acts_oracle* out) {
  return guarded([&] {
    need(e != nullptr && out != nullptr, "null argument");
    const acts::ProbabilityBounds bounds{pi_min, pi_max};
    bounds.validate();
    const auto o = e->env.oracle_policy(context_span(context, n), bounds);
    *out = {o.a_star, o.pi_star, o.best_nonzero, o.expected_differential};
  });
}

acts_status acts_environment_regret(const acts_environment* e, const acts_oracle* oracle,
                                    const acts_decision* decision, const double* context,
                                    size_t n, double* out) {
  return guarded([&] {
    need(e != nullptr && oracle != nullptr && decision != nullptr && out != nullptr,
         "null argument");
    need(decision->candidate_action >= 1 &&
             decision->candidate_action <= e->env.feature_map().n_actions(),
         "candidate action out of range");
    acts::OraclePolicy o{oracle->a_star, oracle->pi_star, oracle->best_nonzero,
                         oracle->expected_differential};
    acts::Decision d;
    d.candidate_action = decision->candidate_action;
    d.pi = decision->pi;
    d.realized_action = decision->realized_action;
    *out = e->env.step_regret(o, d, context_span(context, n));
  });
}

acts_status acts_simulate(const char* config_path, const char* out_dir, char* buf, size_t cap,
                          size_t* needed) {
  return text_result(buf, cap, needed, [&] {
    need(config_path != nullptr, "null config path");
    return acts::simulate_command(config_path, out_dir ? out_dir : "");
  });
}

acts_status acts_replay(const char* log_path, const char* config_path, const char* out_dir,
                        char* buf, size_t cap, size_t* needed) {
  return text_result(buf, cap, needed, [&] {
    need(log_path != nullptr && config_path != nullptr, "null path");
    return acts::replay_command(log_path, config_path, out_dir ? out_dir : "");
  });
}

acts_status acts_generate_log(const char* config_path, double logging_pi, uint64_t horizon,
                              const char* out_path, char* buf, size_t cap, size_t* needed) {
  return text_result(buf, cap, needed, [&] {
    need(config_path != nullptr && out_path != nullptr, "null path");
    return acts::gen_log_command(config_path, logging_pi, horizon, out_path);
  });
}

acts_status acts_diagnostics(const char* trace_path, size_t dim, char* buf, size_t cap,
                             size_t* needed) {
  return text_result(buf, cap, needed, [&] {
    need(trace_path != nullptr, "null trace path");
    return acts::diagnostics_command(trace_path, dim);
  });
}

acts_status acts_theory_v(double R, double epsilon, size_t d, double delta, double* out) {
  return guarded([&] {
    need(out != nullptr, "null output");
    *out = acts::theory_v(R, epsilon, d, delta);
  });
}

acts_status acts_theory_ell(double R, double T, size_t d, double delta, double* out) {
  return guarded([&] {
    need(out != nullptr, "null output");
    *out = acts::theory_ell(R, T, d, delta);
  });
}

double acts_normal_cdf(double x) { return acts::normal_cdf(x); }

}  // extern "C"
