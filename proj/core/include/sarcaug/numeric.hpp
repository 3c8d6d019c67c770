#pragma once

#include <cmath>
#include <cstdint>
#include <string>

namespace sarcaug {

// Round half up (ties toward +infinity): 54.9 -> 55, 0.125 -> 0.13 at 2 places.
// Used for every reported percentage and point delta so tables are reproducible.
inline double round_half_up(double x, int decimals = 0) {
  const double f = std::pow(10.0, decimals);
  return std::floor(x * f + 0.5) / f;
}

// Fixed-decimal formatting, e.g. format_fixed(0.372, 4) == "0.3720".
std::string format_fixed(double x, int decimals);

// 1234567 -> "1,234,567".
std::string format_thousands(long long n);

// 0/10/20 print without a decimal point, 12.5 prints as "12.5".
std::string format_level(double level);

}  // namespace sarcaug
