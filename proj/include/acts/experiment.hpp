#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "acts/environment.hpp"
#include "acts/policy.hpp"

namespace acts {

enum class Algorithm { kActionCentered, kBenchmark };

struct ExperimentConfig {
  Algorithm algorithm = Algorithm::kActionCentered;
  BenchmarkBaseline benchmark_baseline = BenchmarkBaseline::kContext;
  EnvironmentConfig environment;
  ProbabilityBounds bounds;
  double v = 1.0;
  std::size_t horizon = 2000;
  std::size_t trials = 100;
  std::uint64_t master_seed = 0;
  std::string output_path;
  // 0 = one worker per hardware thread.
  std::size_t threads = 0;

  void validate() const;
};

// JSON document <-> config. Missing keys keep their defaults; unknown keys
// are rejected so typos do not silently fall back to defaults.
ExperimentConfig config_from_json(std::string_view text);
std::string config_to_json(const ExperimentConfig& config);
ExperimentConfig load_config(const std::filesystem::path& path);

const char* to_string(Algorithm algorithm);
const char* to_string(BaselineKind kind);
const char* to_string(BenchmarkBaseline baseline);
const char* to_string(ContextProcess process);

struct RegretTrace {
  std::vector<double> per_step;
  std::vector<double> cumulative;

  void push(double regret);
};

struct SumzReport {
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = true;
};

// lhs = sum_t sqrt(pi_t (1 - pi_t)) z_t, rhs = 5 sqrt(d T ln T), T = pi.size().
SumzReport sumz_diagnostic(std::span<const double> pi, std::span<const double> z,
                           std::size_t dim);

struct TrialResult {
  RegretTrace regret;
  std::vector<double> pi;
  std::vector<double> z;
  SumzReport sumz;
};

// Pointwise quantiles over trials; linear interpolation between order
// statistics (h = (n - 1) p).
struct AggregateCurve {
  std::vector<double> median;
  std::vector<double> q1;
  std::vector<double> q3;
};

double quantile_sorted(std::span<const double> sorted, double p);
AggregateCurve aggregate(std::span<const RegretTrace> traces);

struct ExperimentResult {
  std::vector<TrialResult> trials;
  AggregateCurve aggregate;
};

using BanditFactory = std::function<std::unique_ptr<Bandit>(
    const ExperimentConfig&, const Environment&)>;

std::unique_ptr<Bandit> make_bandit(const ExperimentConfig& config);

// One trial: environment stream (trial, 0) and bandit stream (trial, 1)
// derived from master_seed. Each step: advance the baseline process (if
// nonstationary), draw the context, decide, realize the reward, score the
// regret against the oracle, observe.
TrialResult run_trial(const ExperimentConfig& config, std::size_t trial,
                      const BanditFactory& factory = {});

// All trials, merged in trial order regardless of worker scheduling.
ExperimentResult run_experiment(const ExperimentConfig& config,
                                const BanditFactory& factory = {});

// Files under `dir`: trials.csv, aggregate.csv, summary.json.
void write_outputs(const ExperimentConfig& config, const ExperimentResult& result,
                   const std::filesystem::path& dir, double wall_seconds);

// v = R sqrt((24 / epsilon) d ln(1 / delta)).
double theory_v(double R, double epsilon, std::size_t d, double delta);
// l(T) = R sqrt(d ln(T^3) ln(1 / delta)) + 1.
double theory_ell(double R, double T, std::size_t d, double delta);

// Reads a CSV with pi_t and z_t columns (and optionally trial) and reports
// the width-sum diagnostic per trial, as a JSON document.
std::string diagnostics_report(const std::filesystem::path& trace, std::size_t dim);

// Shortest round-trip decimal text for a double.
std::string format_double(double x);

}  // namespace acts
