#include "acts/normal.hpp"

#include <cmath>
#include <numbers>

namespace acts {

double normal_cdf(double x) noexcept {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

}  // namespace acts
