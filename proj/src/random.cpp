#include "acts/random.hpp"

namespace acts {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trial,
                          std::uint64_t stream) noexcept {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ trial);
  return splitmix64(h ^ (stream * 0xD1B54A32D192ED03ULL));
}

std::size_t RandomStream::index(std::size_t n) {
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  return pick(engine_);
}

}  // namespace acts
