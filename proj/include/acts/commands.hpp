#pragma once

#include <cstddef>
#include <filesystem>
#include <string>

// File-level entry points behind the CLI subcommands. Each returns a short
// JSON summary of what it did.
namespace acts {

// Runs the configured experiment; writes trials.csv, aggregate.csv and
// summary.json to out_dir (or the config's output_path when out_dir is empty).
std::string simulate_command(const std::filesystem::path& config_path,
                             const std::filesystem::path& out_dir);

// Replays the configured bandit over a logged CSV once per trial seed and
// writes replay.json (and replay.csv, one row per seed) to out_dir.
std::string replay_command(const std::filesystem::path& log_path,
                           const std::filesystem::path& config_path,
                           const std::filesystem::path& out_dir);

// Simulates a fixed-probability logger in the configured environment.
std::string gen_log_command(const std::filesystem::path& config_path,
                            double logging_pi, std::size_t horizon,
                            const std::filesystem::path& out_path);

std::string diagnostics_command(const std::filesystem::path& trace_path,
                                std::size_t dim);

}  // namespace acts
