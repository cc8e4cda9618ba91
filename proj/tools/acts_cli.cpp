// acts-cli: experiment front end over the libacts C API.
//
//   acts-cli simulate    --config PATH --out DIR
//   acts-cli replay      --log PATH --config PATH --out DIR
//   acts-cli gen-log     --config PATH --pi FLOAT --horizon INT --out PATH
//   acts-cli diagnostics --trace PATH [--dim INT]
//
// On success the command's JSON summary goes to stdout and the exit code is
// 0. On failure a single line `error <status> <json-quoted message>` goes to
// stderr and the exit code is the acts_status value.

#include <cstdint>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "acts/acts.h"

namespace {

using TextCall = std::function<acts_status(char*, size_t, size_t*)>;

int report_failure(acts_status status, const std::string& message) {
  std::fprintf(stderr, "error %s %s\n", acts_status_name(status),
               nlohmann::json(message).dump().c_str());
  return static_cast<int>(status);
}

// `rerunnable` calls have no side effects and may be repeated with a larger
// buffer; for the others the work is already done when the summary does not
// fit, so only a marker is printed.
int run_text(const TextCall& call, bool rerunnable) {
  size_t needed = 0;
  std::vector<char> buf(1 << 16);
  acts_status st = call(buf.data(), buf.size(), &needed);
  if (st == ACTS_ERR_BUFFER_TOO_SMALL && rerunnable) {
    buf.resize(needed);
    st = call(buf.data(), buf.size(), &needed);
  } else if (st == ACTS_ERR_BUFFER_TOO_SMALL) {
    std::fprintf(stdout, "{\"summary_truncated\":true}\n");
    return 0;
  }
  if (st != ACTS_OK) return report_failure(st, acts_last_error());
  std::fprintf(stdout, "%s\n", buf.data());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Action-centered Thompson sampling experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(acts_version()));

  std::string config, out, log, trace;
  double pi = 0.6;
  std::uint64_t horizon = 0;
  std::size_t dim = 8;

  auto* simulate = app.add_subcommand("simulate", "Run seeded multi-trial regret experiments");
  simulate->add_option("--config", config, "Experiment config (JSON)")->required();
  simulate->add_option("--out", out, "Output directory")->required();

  auto* replay = app.add_subcommand("replay", "Offline replay evaluation of a logged CSV");
  replay->add_option("--log", log, "Logged decisions (CSV)")->required();
  replay->add_option("--config", config, "Bandit config (JSON)")->required();
  replay->add_option("--out", out, "Output directory")->required();

  auto* gen_log = app.add_subcommand("gen-log", "Simulate a fixed-probability logging policy");
  gen_log->add_option("--config", config, "Environment config (JSON)")->required();
  gen_log->add_option("--pi", pi, "Probability of sending a nonzero action")->required();
  gen_log->add_option("--horizon", horizon, "Number of decision points")->required();
  gen_log->add_option("--out", out, "Output CSV path")->required();

  auto* diagnostics = app.add_subcommand("diagnostics", "Width-sum bound check on a trace");
  diagnostics->add_option("--trace", trace, "CSV with pi_t and z_t columns")->required();
  diagnostics->add_option("--dim", dim, "Posterior dimension d")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_failure(ACTS_ERR_INVALID_ARGUMENT, e.what());
  }

  if (*simulate) {
    return run_text([&](char* b, size_t c, size_t* n) {
      return acts_simulate(config.c_str(), out.c_str(), b, c, n);
    }, false);
  }
  if (*replay) {
    return run_text([&](char* b, size_t c, size_t* n) {
      return acts_replay(log.c_str(), config.c_str(), out.c_str(), b, c, n);
    }, false);
  }
  if (*gen_log) {
    return run_text([&](char* b, size_t c, size_t* n) {
      return acts_generate_log(config.c_str(), pi, horizon, out.c_str(), b, c, n);
    }, false);
  }
  return run_text([&](char* b, size_t c, size_t* n) {
    return acts_diagnostics(trace.c_str(), dim, b, c, n);
  }, true);
}
