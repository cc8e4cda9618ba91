#include "acts/replay.hpp"

#include <cmath>
#include <fstream>
#include <string>

#include "acts/error.hpp"
#include "acts/experiment.hpp"
#include "csv.hpp"

namespace acts {

namespace {

[[noreturn]] void row_error(std::size_t line, const std::string& what) {
  fail(ErrorCode::kParse, "log line " + std::to_string(line) + ": " + what);
}

}  // namespace

std::vector<LogRecord> parse_log(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::kParse, "log: missing header row");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  const auto header = csv::split(line);
  const std::size_t columns = header.size();
  if (columns < 4 || csv::trim(header[0]) != "index" ||
      csv::trim(header[columns - 3]) != "action" ||
      csv::trim(header[columns - 2]) != "logging_prob" ||
      csv::trim(header[columns - 1]) != "reward") {
    row_error(1, "header must be index,ctx_0,...,action,logging_prob,reward");
  }
  const std::size_t L = columns - 4;
  for (std::size_t j = 0; j < L; ++j) {
    if (csv::trim(header[1 + j]) != "ctx_" + std::to_string(j)) {
      row_error(1, "expected column ctx_" + std::to_string(j));
    }
  }

  std::vector<LogRecord> log;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (csv::trim(line).empty()) continue;
    const auto cells = csv::split(line);
    if (cells.size() != columns) {
      row_error(line_no, "expected " + std::to_string(columns) + " columns, found " +
                             std::to_string(cells.size()));
    }
    LogRecord rec;
    auto index = csv::to_index(cells[0]);
    if (!index) row_error(line_no, "malformed index");
    rec.index = *index;
    if (!log.empty() && rec.index <= log.back().index) {
      row_error(line_no, "index not strictly increasing");
    }
    rec.context.resize(L);
    for (std::size_t j = 0; j < L; ++j) {
      auto x = csv::to_double(cells[1 + j]);
      if (!x || !std::isfinite(*x)) row_error(line_no, "malformed ctx_" + std::to_string(j));
      rec.context[j] = *x;
    }
    auto action = csv::to_index(cells[columns - 3]);
    if (!action) row_error(line_no, "malformed action");
    rec.action = *action;
    auto prob = csv::to_double(cells[columns - 2]);
    if (!prob) row_error(line_no, "malformed logging_prob");
    if (!(*prob > 0.0 && *prob < 1.0)) row_error(line_no, "logging_prob outside (0, 1)");
    rec.logging_prob = *prob;
    auto reward = csv::to_double(cells[columns - 1]);
    if (!reward || !std::isfinite(*reward)) row_error(line_no, "malformed reward");
    rec.reward = *reward;
    log.push_back(std::move(rec));
  }
  return log;
}

std::vector<LogRecord> read_log(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open log '" + path.string() + "'");
  try {
    return parse_log(in);
  } catch (const Error& e) {
    fail(e.code(), path.string() + ": " + e.what());
  }
}

void write_log(std::ostream& out, const std::vector<LogRecord>& log) {
  const std::size_t L = log.empty() ? 0 : log.front().context.size();
  out << "index";
  for (std::size_t j = 0; j < L; ++j) out << ",ctx_" << j;
  out << ",action,logging_prob,reward\n";
  for (const auto& rec : log) {
    require(rec.context.size() == L, "log records differ in context length");
    out << rec.index;
    for (double x : rec.context) out << ',' << format_double(x);
    out << ',' << rec.action << ',' << format_double(rec.logging_prob) << ','
        << format_double(rec.reward) << '\n';
  }
}

void write_log(const std::filesystem::path& path, const std::vector<LogRecord>& log) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot open '" + path.string() + "' for writing");
  write_log(out, log);
  out.flush();
  if (!out) fail(ErrorCode::kIo, "write failed for '" + path.string() + "'");
}

ReplayResult replay(const std::vector<LogRecord>& log, Bandit& policy,
                    RandomStream& rng) {
  require(!log.empty(), "replay: empty log");
  ReplayResult r;
  r.total_count = log.size();
  double weighted = 0.0;
  for (const auto& rec : log) {
    const Decision d = policy.decide(rec.context, rng);
    if (d.realized_action != rec.action) continue;
    policy.observe(d, rec.context, rec.reward);
    const double w = 1.0 / rec.logging_prob;
    weighted += w * rec.reward;
    r.weight_sum += w;
    r.accepted.emplace_back(w, rec.reward);
  }
  r.accepted_count = r.accepted.size();
  r.value_estimate = r.weight_sum > 0.0 ? weighted / r.weight_sum : 0.0;
  return r;
}

double bootstrap_standard_error(const ReplayResult& result, std::size_t resamples,
                                RandomStream& rng) {
  require(resamples >= 2, "bootstrap needs at least two resamples");
  require(result.total_count >= 1, "bootstrap of an empty replay");
  std::vector<double> estimates;
  estimates.reserve(resamples);
  const std::size_t n = result.total_count;
  for (std::size_t b = 0; b < resamples; ++b) {
    double wr = 0.0;
    double w = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t k = rng.index(n);
      if (k < result.accepted.size()) {
        w += result.accepted[k].first;
        wr += result.accepted[k].first * result.accepted[k].second;
      }
    }
    if (w > 0.0) estimates.push_back(wr / w);
  }
  require(estimates.size() >= 2, "bootstrap: too few non-degenerate resamples");
  double mean = 0.0;
  for (double e : estimates) mean += e;
  mean /= static_cast<double>(estimates.size());
  double ss = 0.0;
  for (double e : estimates) ss += (e - mean) * (e - mean);
  return std::sqrt(ss / static_cast<double>(estimates.size() - 1));
}

std::vector<LogRecord> generate_log(Environment& env, double logging_pi,
                                    std::size_t horizon, RandomStream& rng) {
  require(logging_pi > 0.0 && logging_pi < 1.0, "logging_pi must lie in (0, 1)");
  const std::size_t N = env.feature_map().n_actions();
  const bool drifting = env.config().baseline == BaselineKind::kNonstationary;
  std::vector<LogRecord> log;
  log.reserve(horizon);
  for (std::size_t t = 0; t < horizon; ++t) {
    if (drifting) env.gp_step(rng);
    LogRecord rec;
    rec.index = t;
    rec.context = env.gen_context(rng);
    if (rng.uniform() < logging_pi) {
      rec.action = 1 + rng.index(N);
      rec.logging_prob = logging_pi / static_cast<double>(N);
    } else {
      rec.action = 0;
      rec.logging_prob = 1.0 - logging_pi;
    }
    rec.reward = env.realize_reward(rec.context, rec.action, rng);
    log.push_back(std::move(rec));
  }
  return log;
}

}  // namespace acts
