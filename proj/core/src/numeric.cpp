#include "sarcaug/numeric.hpp"

#include <cstdio>

namespace sarcaug {

std::string format_fixed(double x, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, x);
  std::string s(buf);
  if (s == "-0" || s.rfind("-0.", 0) == 0) {
    // normalize negative zero ("-0.0" -> "0.0")
    bool all_zero = true;
    for (char c : s)
      if (c != '-' && c != '0' && c != '.') all_zero = false;
    if (all_zero) s.erase(0, 1);
  }
  return s;
}

std::string format_thousands(long long n) {
  const bool neg = n < 0;
  std::string digits = std::to_string(neg ? -n : n);
  std::string out;
  int count = 0;
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
    if (count && count % 3 == 0) out.push_back(',');
    out.push_back(*it);
    ++count;
  }
  if (neg) out.push_back('-');
  return {out.rbegin(), out.rend()};
}

std::string format_level(double level) {
  if (level == static_cast<long long>(level))
    return std::to_string(static_cast<long long>(level));
  std::string s = format_fixed(level, 6);
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

}  // namespace sarcaug
