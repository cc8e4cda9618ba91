#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <ostream>
#include <utility>
#include <vector>

#include "acts/environment.hpp"
#include "acts/policy.hpp"
#include "acts/random.hpp"

namespace acts {

struct LogRecord {
  std::size_t index = 0;
  std::vector<double> context;
  std::size_t action = 0;
  double logging_prob = 0.5;  // probability the logger gave `action`
  double reward = 0.0;
};

struct ReplayResult {
  double value_estimate = 0.0;  // sum(w r) / sum(w) over accepted events
  std::size_t accepted_count = 0;
  std::size_t total_count = 0;
  double weight_sum = 0.0;
  // (weight, reward) of each accepted event, in log order.
  std::vector<std::pair<double, double>> accepted;

  bool degenerate() const noexcept { return weight_sum == 0.0; }
};

// CSV: index,ctx_0,...,ctx_{L-1},action,logging_prob,reward. L is taken from
// the header. Errors name the 1-based line number.
std::vector<LogRecord> parse_log(std::istream& in);
std::vector<LogRecord> read_log(const std::filesystem::path& path);
void write_log(std::ostream& out, const std::vector<LogRecord>& log);
void write_log(const std::filesystem::path& path, const std::vector<LogRecord>& log);

// Rejection replay with inverse-propensity weights. For each record the
// policy decides; if its realized action equals the logged one the policy
// observes the logged reward and the event enters the estimate with weight
// 1 / logging_prob. Mismatched events are skipped with no update.
ReplayResult replay(const std::vector<LogRecord>& log, Bandit& policy,
                    RandomStream& rng);

// Bootstrap standard error of value_estimate, resampling all total_count
// records (skipped records contribute nothing to either sum).
double bootstrap_standard_error(const ReplayResult& result, std::size_t resamples,
                                RandomStream& rng);

// Fixed-probability logger: a nonzero action is sent with probability
// logging_pi, uniformly among the N arms. Nonstationary environments are
// advanced once per record.
std::vector<LogRecord> generate_log(Environment& env, double logging_pi,
                                    std::size_t horizon, RandomStream& rng);

}  // namespace acts
