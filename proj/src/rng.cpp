#include "certipose/rng.hpp"

#include <cmath>

namespace certipose {

double SplitMix64::angle() {
  return M_PI - 2.0 * M_PI * next_double();
}

double SplitMix64::gaussian() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  const double u1 = 1.0 - next_double();  // (0, 1]
  const double u2 = next_double();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double phase = 2.0 * M_PI * u2;
  cached_ = radius * std::sin(phase);
  has_cached_ = true;
  return radius * std::cos(phase);
}

}  // namespace certipose
