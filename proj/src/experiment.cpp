#include "acts/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "acts/error.hpp"

namespace acts {

using nlohmann::json;

namespace {

template <typename T>
void read_key(const json& obj, const char* key, T& out) {
  if (auto it = obj.find(key); it != obj.end()) out = it->template get<T>();
}

void reject_unknown(const json& obj, std::initializer_list<const char*> known,
                    const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find_if(known.begin(), known.end(), [&](const char* k) {
          return it.key() == k;
        }) == known.end()) {
      fail(ErrorCode::kParse, "config: unknown key '" + it.key() + "' in " + where);
    }
  }
}

Algorithm parse_algorithm(const std::string& s) {
  if (s == "action_centered") return Algorithm::kActionCentered;
  if (s == "benchmark") return Algorithm::kBenchmark;
  fail(ErrorCode::kParse, "config: unknown algorithm '" + s + "'");
}

BenchmarkBaseline parse_benchmark_baseline(const std::string& s) {
  if (s == "context") return BenchmarkBaseline::kContext;
  if (s == "none") return BenchmarkBaseline::kNone;
  fail(ErrorCode::kParse, "config: unknown benchmark_baseline '" + s + "'");
}

ContextProcess parse_context_process(const std::string& s) {
  if (s == "iid") return ContextProcess::kIid;
  if (s == "gp") return ContextProcess::kGaussianProcess;
  fail(ErrorCode::kParse, "config: unknown context_process '" + s + "'");
}

BaselineKind parse_baseline(const std::string& s) {
  if (s == "nonlinear") return BaselineKind::kNonlinear;
  if (s == "nonstationary") return BaselineKind::kNonstationary;
  fail(ErrorCode::kParse, "config: unknown baseline '" + s + "'");
}

json environment_to_json(const EnvironmentConfig& env) {
  const Vector theta = env.resolved_theta();
  return json{{"baseline", to_string(env.baseline)},
              {"context_process", to_string(env.context_process)},
              {"context_dim", env.context_dim},
              {"n_actions", env.n_actions},
              {"selector", env.selector},
              {"intercept", env.intercept},
              {"theta", std::vector<double>(theta.data(), theta.data() + theta.size())},
              {"noise_sigma", env.noise_sigma},
              {"gp_rho", env.gp_rho},
              {"gp_eta0", env.gp_eta0},
              {"nonlinear_threshold", env.nonlinear_threshold},
              {"nonlinear_amplitude", env.nonlinear_amplitude}};
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot open '" + path.string() + "' for writing");
  return out;
}

void finish_output(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) fail(ErrorCode::kIo, "write failed for '" + path.string() + "'");
}

}  // namespace

const char* to_string(Algorithm algorithm) {
  return algorithm == Algorithm::kActionCentered ? "action_centered" : "benchmark";
}

const char* to_string(BaselineKind kind) {
  return kind == BaselineKind::kNonlinear ? "nonlinear" : "nonstationary";
}

const char* to_string(BenchmarkBaseline baseline) {
  return baseline == BenchmarkBaseline::kContext ? "context" : "none";
}

const char* to_string(ContextProcess process) {
  return process == ContextProcess::kIid ? "iid" : "gp";
}

std::string format_double(double x) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, end);
}

void ExperimentConfig::validate() const {
  environment.validate();
  bounds.validate();
  require(std::isfinite(v) && v > 0.0, "v must be positive");
  require(horizon >= 1, "horizon must be positive");
  require(trials >= 1, "trials must be positive");
}

ExperimentConfig config_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::kParse, std::string("config: ") + e.what());
  }
  if (!doc.is_object()) fail(ErrorCode::kParse, "config: top level must be an object");

  ExperimentConfig cfg;
  try {
    reject_unknown(doc,
                   {"algorithm", "benchmark_baseline", "environment", "bounds", "v",
                    "horizon", "trials", "master_seed", "output_path", "threads"},
                   "config");
    if (auto it = doc.find("algorithm"); it != doc.end())
      cfg.algorithm = parse_algorithm(it->get<std::string>());
    if (auto it = doc.find("benchmark_baseline"); it != doc.end())
      cfg.benchmark_baseline = parse_benchmark_baseline(it->get<std::string>());
    read_key(doc, "v", cfg.v);
    read_key(doc, "horizon", cfg.horizon);
    read_key(doc, "trials", cfg.trials);
    read_key(doc, "master_seed", cfg.master_seed);
    read_key(doc, "output_path", cfg.output_path);
    read_key(doc, "threads", cfg.threads);
    if (auto it = doc.find("bounds"); it != doc.end()) {
      reject_unknown(*it, {"pi_min", "pi_max"}, "bounds");
      read_key(*it, "pi_min", cfg.bounds.pi_min);
      read_key(*it, "pi_max", cfg.bounds.pi_max);
    }
    if (auto it = doc.find("environment"); it != doc.end()) {
      const json& e = *it;
      reject_unknown(e,
                     {"baseline", "context_process", "context_dim", "n_actions",
                      "selector", "intercept", "theta",
                      "noise_sigma", "gp_rho", "gp_eta0", "nonlinear_threshold",
                      "nonlinear_amplitude"},
                     "environment");
      auto& env = cfg.environment;
      if (auto b = e.find("baseline"); b != e.end())
        env.baseline = parse_baseline(b->get<std::string>());
      if (auto c = e.find("context_process"); c != e.end())
        env.context_process = parse_context_process(c->get<std::string>());
      read_key(e, "context_dim", env.context_dim);
      read_key(e, "intercept", env.intercept);
      read_key(e, "n_actions", env.n_actions);
      read_key(e, "selector", env.selector);
      read_key(e, "theta", env.theta);
      read_key(e, "noise_sigma", env.noise_sigma);
      read_key(e, "gp_rho", env.gp_rho);
      read_key(e, "gp_eta0", env.gp_eta0);
      read_key(e, "nonlinear_threshold", env.nonlinear_threshold);
      read_key(e, "nonlinear_amplitude", env.nonlinear_amplitude);
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::kParse, std::string("config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

std::string config_to_json(const ExperimentConfig& config) {
  json doc{{"algorithm", to_string(config.algorithm)},
           {"benchmark_baseline", to_string(config.benchmark_baseline)},
           {"environment", environment_to_json(config.environment)},
           {"bounds", {{"pi_min", config.bounds.pi_min}, {"pi_max", config.bounds.pi_max}}},
           {"v", config.v},
           {"horizon", config.horizon},
           {"trials", config.trials},
           {"master_seed", config.master_seed},
           {"output_path", config.output_path},
           {"threads", config.threads}};
  return doc.dump(2);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open config '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return config_from_json(buf.str());
  } catch (const Error& e) {
    fail(e.code(), path.string() + ": " + e.what());
  }
}

void RegretTrace::push(double regret) {
  per_step.push_back(regret);
  cumulative.push_back((cumulative.empty() ? 0.0 : cumulative.back()) + regret);
}

SumzReport sumz_diagnostic(std::span<const double> pi, std::span<const double> z,
                           std::size_t dim) {
  require(pi.size() == z.size(), "sumz: pi and z traces differ in length");
  SumzReport r;
  for (std::size_t t = 0; t < pi.size(); ++t) {
    r.lhs += std::sqrt(pi[t] * (1.0 - pi[t])) * z[t];
  }
  // The bound is stated for T >= 2; a single step is scored against T = 2.
  const double T = static_cast<double>(std::max<std::size_t>(pi.size(), 2));
  r.rhs = 5.0 * std::sqrt(static_cast<double>(dim) * T * std::log(T));
  r.satisfied = r.lhs <= r.rhs;
  return r;
}

double quantile_sorted(std::span<const double> sorted, double p) {
  require(!sorted.empty(), "quantile of an empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

AggregateCurve aggregate(std::span<const RegretTrace> traces) {
  require(!traces.empty(), "aggregate needs at least one trace");
  const std::size_t T = traces.front().cumulative.size();
  for (const auto& tr : traces) {
    require(tr.cumulative.size() == T, "aggregate: ragged trace lengths");
  }
  AggregateCurve out;
  out.median.resize(T);
  out.q1.resize(T);
  out.q3.resize(T);
  std::vector<double> column(traces.size());
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t i = 0; i < traces.size(); ++i) column[i] = traces[i].cumulative[t];
    std::sort(column.begin(), column.end());
    out.q1[t] = quantile_sorted(column, 0.25);
    out.median[t] = quantile_sorted(column, 0.5);
    out.q3[t] = quantile_sorted(column, 0.75);
  }
  return out;
}

std::unique_ptr<Bandit> make_bandit(const ExperimentConfig& config) {
  const FeatureMap map = config.environment.feature_map();
  if (config.algorithm == Algorithm::kActionCentered) {
    return std::make_unique<ActionCenteredBandit>(map, config.bounds, config.v);
  }
  return std::make_unique<BenchmarkBandit>(map, config.environment.context_dim,
                                           config.bounds, config.v,
                                           config.benchmark_baseline);
}

TrialResult run_trial(const ExperimentConfig& config, std::size_t trial,
                      const BanditFactory& factory) {
  Environment env(config.environment);
  std::unique_ptr<Bandit> bandit = factory ? factory(config, env) : make_bandit(config);
  RandomStream env_rng = RandomStream::derived(config.master_seed, trial, 0);
  RandomStream bandit_rng = RandomStream::derived(config.master_seed, trial, 1);
  const bool drifting = config.environment.baseline == BaselineKind::kNonstationary;

  TrialResult out;
  out.regret.per_step.reserve(config.horizon);
  out.regret.cumulative.reserve(config.horizon);
  out.pi.reserve(config.horizon);
  out.z.reserve(config.horizon);
  for (std::size_t t = 0; t < config.horizon; ++t) {
    if (drifting) env.gp_step(env_rng);
    const std::vector<double> context = env.gen_context(env_rng);
    const Decision decision = bandit->decide(context, bandit_rng);
    const double reward = env.realize_reward(context, decision.realized_action, env_rng);
    const OraclePolicy oracle = env.oracle_policy(context, config.bounds);
    out.regret.push(env.step_regret(oracle, decision, context));
    out.pi.push_back(decision.pi);
    out.z.push_back(bandit->z_width(decision));
    bandit->observe(decision, context, reward);
  }
  out.sumz = sumz_diagnostic(out.pi, out.z, bandit->posterior().dim());
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& config,
                                const BanditFactory& factory) {
  config.validate();
  ExperimentResult result;
  result.trials.resize(config.trials);

  std::size_t workers = config.threads ? config.threads
                                       : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, config.trials);

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  auto work = [&](std::size_t w) {
    try {
      for (std::size_t i = next++; i < config.trials; i = next++) {
        result.trials[i] = run_trial(config, i, factory);
      }
    } catch (...) {
      errors[w] = std::current_exception();
      next = config.trials;
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<RegretTrace> traces;
  traces.reserve(result.trials.size());
  for (const auto& tr : result.trials) traces.push_back(tr.regret);
  result.aggregate = aggregate(traces);
  return result;
}

void write_outputs(const ExperimentConfig& config, const ExperimentResult& result,
                   const std::filesystem::path& dir, double wall_seconds) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorCode::kIo, "cannot create '" + dir.string() + "': " + ec.message());

  const auto trials_path = dir / "trials.csv";
  auto trials = open_output(trials_path);
  trials << "trial,t,regret,cum_regret,pi_t,z_t\n";
  for (std::size_t i = 0; i < result.trials.size(); ++i) {
    const auto& tr = result.trials[i];
    for (std::size_t t = 0; t < tr.pi.size(); ++t) {
      trials << i << ',' << t + 1 << ',' << format_double(tr.regret.per_step[t]) << ','
             << format_double(tr.regret.cumulative[t]) << ',' << format_double(tr.pi[t])
             << ',' << format_double(tr.z[t]) << '\n';
    }
  }
  finish_output(trials, trials_path);

  const auto agg_path = dir / "aggregate.csv";
  auto agg = open_output(agg_path);
  agg << "t,median,q1,q3\n";
  const auto& curve = result.aggregate;
  for (std::size_t t = 0; t < curve.median.size(); ++t) {
    agg << t + 1 << ',' << format_double(curve.median[t]) << ','
        << format_double(curve.q1[t]) << ',' << format_double(curve.q3[t]) << '\n';
  }
  finish_output(agg, agg_path);

  json sumz = json::array();
  std::size_t violations = 0;
  double max_ratio = 0.0;
  for (const auto& tr : result.trials) {
    sumz.push_back({{"lhs", tr.sumz.lhs}, {"rhs", tr.sumz.rhs},
                    {"satisfied", tr.sumz.satisfied}});
    if (!tr.sumz.satisfied) ++violations;
    max_ratio = std::max(max_ratio, tr.sumz.lhs / tr.sumz.rhs);
  }
  const std::size_t T = curve.median.size();
  json summary{
      {"config", json::parse(config_to_json(config))},
      {"final", {{"t", T},
                 {"median_cum_regret", curve.median.back()},
                 {"q1_cum_regret", curve.q1.back()},
                 {"q3_cum_regret", curve.q3.back()}}},
      {"sumz", {{"applies", config.algorithm == Algorithm::kActionCentered},
                {"violations", violations},
                {"max_lhs_over_rhs", max_ratio},
                {"per_trial", sumz}}},
      {"wall_seconds", wall_seconds}};
  const auto summary_path = dir / "summary.json";
  auto out = open_output(summary_path);
  out << summary.dump(2) << '\n';
  finish_output(out, summary_path);
}

double theory_v(double R, double epsilon, std::size_t d, double delta) {
  require(R > 0.0, "theory_v: R must be positive");
  require(epsilon > 0.0 && epsilon < 1.0, "theory_v: epsilon must lie in (0, 1)");
  require(d >= 1, "theory_v: d must be positive");
  require(delta > 0.0 && delta < 1.0, "theory_v: delta must lie in (0, 1)");
  return R * std::sqrt((24.0 / epsilon) * static_cast<double>(d) * std::log(1.0 / delta));
}

double theory_ell(double R, double T, std::size_t d, double delta) {
  require(R > 0.0, "theory_ell: R must be positive");
  require(T >= 2.0, "theory_ell: T must be at least 2");
  require(d >= 1, "theory_ell: d must be positive");
  require(delta > 0.0 && delta < 1.0, "theory_ell: delta must lie in (0, 1)");
  return R * std::sqrt(static_cast<double>(d) * 3.0 * std::log(T) * std::log(1.0 / delta)) +
         1.0;
}

}  // namespace acts
