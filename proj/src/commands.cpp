#include "acts/commands.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <map>

#include <json.hpp>

#include "acts/error.hpp"
#include "acts/experiment.hpp"
#include "acts/replay.hpp"
#include "csv.hpp"

namespace acts {

using nlohmann::json;

namespace {

std::filesystem::path resolve_out(const ExperimentConfig& cfg,
                                  const std::filesystem::path& out_dir) {
  if (!out_dir.empty()) return out_dir;
  require(!cfg.output_path.empty(), "no output directory given and config has no output_path");
  return cfg.output_path;
}

}  // namespace

std::string simulate_command(const std::filesystem::path& config_path,
                             const std::filesystem::path& out_dir) {
  const ExperimentConfig cfg = load_config(config_path);
  const auto dir = resolve_out(cfg, out_dir);
  const auto start = std::chrono::steady_clock::now();
  const ExperimentResult result = run_experiment(cfg);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_outputs(cfg, result, dir, wall);

  std::size_t violations = 0;
  for (const auto& tr : result.trials) violations += tr.sumz.satisfied ? 0 : 1;
  json out{{"command", "simulate"},
           {"out", dir.string()},
           {"algorithm", to_string(cfg.algorithm)},
           {"trials", cfg.trials},
           {"horizon", cfg.horizon},
           {"median_cum_regret", result.aggregate.median.back()},
           {"sumz_violations", violations}};
  return out.dump();
}

std::string replay_command(const std::filesystem::path& log_path,
                           const std::filesystem::path& config_path,
                           const std::filesystem::path& out_dir) {
  const ExperimentConfig cfg = load_config(config_path);
  const auto dir = resolve_out(cfg, out_dir);
  const std::vector<LogRecord> log = read_log(log_path);
  require(!log.empty(), "replay: log '" + log_path.string() + "' has no records");
  require(log.front().context.size() == cfg.environment.context_dim,
          "replay: log context width " + std::to_string(log.front().context.size()) +
              " does not match config context_dim " +
              std::to_string(cfg.environment.context_dim));

  double logged_mean = 0.0;
  for (const auto& rec : log) logged_mean += rec.reward;
  logged_mean /= static_cast<double>(log.size());

  json runs = json::array();
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t usable = 0;
  for (std::size_t i = 0; i < cfg.trials; ++i) {
    auto bandit = make_bandit(cfg);
    RandomStream rng = RandomStream::derived(cfg.master_seed, i, 1);
    const ReplayResult r = replay(log, *bandit, rng);
    runs.push_back({{"seed_index", i},
                    {"value_estimate", r.value_estimate},
                    {"accepted_count", r.accepted_count},
                    {"total_count", r.total_count},
                    {"weight_sum", r.weight_sum},
                    {"degenerate", r.degenerate()}});
    if (!r.degenerate()) {
      sum += r.value_estimate;
      sum_sq += r.value_estimate * r.value_estimate;
      ++usable;
    }
  }
  const double mean = usable ? sum / static_cast<double>(usable) : 0.0;
  const double var = usable > 1 ? (sum_sq - usable * mean * mean) / static_cast<double>(usable - 1)
                                : 0.0;

  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorCode::kIo, "cannot create '" + dir.string() + "': " + ec.message());

  json summary{{"log", log_path.string()},
               {"records", log.size()},
               {"algorithm", to_string(cfg.algorithm)},
               {"config", json::parse(config_to_json(cfg))},
               {"logging_policy_mean_reward", logged_mean},
               {"mean_value_estimate", mean},
               {"sd_value_estimate", std::sqrt(std::max(0.0, var))},
               {"improvement_over_logging", mean - logged_mean},
               {"usable_runs", usable},
               {"runs", runs}};
  const auto path = dir / "replay.json";
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot open '" + path.string() + "' for writing");
  out << summary.dump(2) << '\n';
  if (!out) fail(ErrorCode::kIo, "write failed for '" + path.string() + "'");

  return json{{"command", "replay"},
              {"out", path.string()},
              {"records", log.size()},
              {"mean_value_estimate", mean},
              {"logging_policy_mean_reward", logged_mean}}
      .dump();
}

std::string gen_log_command(const std::filesystem::path& config_path,
                            double logging_pi, std::size_t horizon,
                            const std::filesystem::path& out_path) {
  const ExperimentConfig cfg = load_config(config_path);
  Environment env(cfg.environment);
  RandomStream rng = RandomStream::derived(cfg.master_seed, 0, 2);
  const auto log = generate_log(env, logging_pi, horizon, rng);
  if (out_path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(out_path.parent_path(), ec);
  }
  write_log(out_path, log);
  return json{{"command", "gen-log"}, {"out", out_path.string()}, {"records", log.size()}}
      .dump();
}

std::string diagnostics_command(const std::filesystem::path& trace_path,
                                std::size_t dim) {
  return diagnostics_report(trace_path, dim);
}

std::string diagnostics_report(const std::filesystem::path& trace, std::size_t dim) {
  require(dim >= 1, "diagnostics: dimension must be positive");
  std::ifstream in(trace, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open trace '" + trace.string() + "'");

  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::kParse, trace.string() + ": empty trace");
  const auto header = csv::split(line);
  std::ptrdiff_t pi_col = -1, z_col = -1, trial_col = -1;
  for (std::size_t j = 0; j < header.size(); ++j) {
    const auto name = csv::trim(header[j]);
    if (name == "pi_t") pi_col = static_cast<std::ptrdiff_t>(j);
    if (name == "z_t") z_col = static_cast<std::ptrdiff_t>(j);
    if (name == "trial") trial_col = static_cast<std::ptrdiff_t>(j);
  }
  if (pi_col < 0 || z_col < 0)
    fail(ErrorCode::kParse, trace.string() + ": trace needs pi_t and z_t columns");

  std::map<std::size_t, std::pair<std::vector<double>, std::vector<double>>> by_trial;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (csv::trim(line).empty()) continue;
    const auto cells = csv::split(line);
    if (cells.size() != header.size())
      fail(ErrorCode::kParse, trace.string() + ": line " + std::to_string(line_no) +
                                  ": wrong column count");
    std::size_t trial = 0;
    if (trial_col >= 0) {
      auto t = csv::to_index(cells[static_cast<std::size_t>(trial_col)]);
      if (!t) fail(ErrorCode::kParse, trace.string() + ": line " + std::to_string(line_no) +
                                          ": malformed trial");
      trial = *t;
    }
    auto pi = csv::to_double(cells[static_cast<std::size_t>(pi_col)]);
    auto z = csv::to_double(cells[static_cast<std::size_t>(z_col)]);
    if (!pi || !z || *pi < 0.0 || *pi > 1.0 || *z < 0.0)
      fail(ErrorCode::kParse, trace.string() + ": line " + std::to_string(line_no) +
                                  ": malformed pi_t or z_t");
    auto& [pis, zs] = by_trial[trial];
    pis.push_back(*pi);
    zs.push_back(*z);
  }

  json trials = json::array();
  bool all = true;
  for (const auto& [trial, series] : by_trial) {
    const SumzReport r = sumz_diagnostic(series.first, series.second, dim);
    all = all && r.satisfied;
    trials.push_back({{"trial", trial},
                      {"steps", series.first.size()},
                      {"lhs", r.lhs},
                      {"rhs", r.rhs},
                      {"satisfied", r.satisfied}});
  }
  return json{{"trace", trace.string()},
              {"dim", dim},
              {"all_satisfied", all},
              {"trials", trials}}
      .dump();
}

}  // namespace acts
