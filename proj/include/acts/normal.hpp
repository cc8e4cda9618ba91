#pragma once

namespace acts {

// Standard normal CDF, evaluated through erfc so the lower tail keeps full
// relative precision.
double normal_cdf(double x) noexcept;

}  // namespace acts
