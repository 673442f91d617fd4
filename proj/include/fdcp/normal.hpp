#pragma once

#include <cmath>
#include <numbers>

namespace fdcp {

/// Standard normal distribution function, F(x) = erfc(-x / sqrt 2) / 2.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/// Upper tail 1 - F(x), evaluated without cancellation for large x.
inline double normal_sf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

}  // namespace fdcp
