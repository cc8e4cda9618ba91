#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace acts {

// SplitMix64 finalizer. Used to derive independent seeds from a master seed.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Seed for substream `stream` of trial `trial` under `master`. Every
// (master, trial, stream) triple maps to its own mt19937_64 seed; the mixing
// is applied per component so nearby indices do not produce related seeds.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trial,
                          std::uint64_t stream = 0) noexcept;

// Owns the PRNG and the normal-variate cache. mt19937_64 + the standard
// library distributions: reproducible within one build/toolchain.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  static RandomStream derived(std::uint64_t master, std::uint64_t trial,
                              std::uint64_t stream = 0) {
    return RandomStream(derive_seed(master, trial, stream));
  }

  double normal() { return normal_(engine_); }

  // Uniform on [0, 1).
  double uniform() { return uniform_(engine_); }

  // Uniform integer on [0, n).
  std::size_t index(std::size_t n);

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace acts
