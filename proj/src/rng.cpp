#include "hypervec/rng.hpp"

#include <cmath>
#include <numbers>

namespace hypervec {

double NormalSampler::next() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  const double u1 = rng_.u01_open();
  const double u2 = rng_.u01();
  const double mag = std::sqrt(-2.0 * std::log(u1));
  const double ang = 2.0 * std::numbers::pi * u2;
  cached_ = mag * std::sin(ang);
  has_cached_ = true;
  return mag * std::cos(ang);
}

}  // namespace hypervec
