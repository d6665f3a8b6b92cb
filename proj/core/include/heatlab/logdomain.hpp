#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace heatlab {

inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

// log(exp(a) + exp(b)) without leaving the log domain.
inline double log_add(double a, double b) {
  if (a == kLogZero) return b;
  if (b == kLogZero) return a;
  double hi = std::max(a, b), lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

inline double log_or_zero(double v) { return v > 0 ? std::log(v) : kLogZero; }

}  // namespace heatlab
