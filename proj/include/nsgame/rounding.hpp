#pragma once

// Directed-rounding helpers for the float side of bound comparisons.
// Each helper evaluates in round-to-nearest and then steps outward, so the
// returned value bounds the true real result in the named direction. libm
// exp/log/sqrt are within one ulp on glibc; two steps cover that.

#include <cmath>
#include <limits>

namespace nsgame::rounding {

inline double up(double x, int ulps = 1) {
  for (int i = 0; i < ulps; ++i) x = std::nextafter(x, std::numeric_limits<double>::infinity());
  return x;
}

inline double down(double x, int ulps = 1) {
  for (int i = 0; i < ulps; ++i) x = std::nextafter(x, -std::numeric_limits<double>::infinity());
  return x;
}

inline double add_up(double a, double b) { return up(a + b); }
inline double add_down(double a, double b) { return down(a + b); }
inline double mul_up(double a, double b) { return up(a * b); }
inline double mul_down(double a, double b) { return down(a * b); }
inline double div_up(double a, double b) { return up(a / b); }
inline double div_down(double a, double b) { return down(a / b); }

inline double sqrt_up(double x) { return x <= 0.0 ? 0.0 : up(std::sqrt(x)); }
inline double exp_up(double x) { return up(std::exp(x), 2); }
inline double exp_down(double x) {
  double r = down(std::exp(x), 2);
  return r < 0.0 ? 0.0 : r;
}
inline double log_up(double x) { return up(std::log(x), 2); }
inline double log_down(double x) { return down(std::log(x), 2); }

}  // namespace nsgame::rounding
