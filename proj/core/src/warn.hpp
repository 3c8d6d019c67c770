#pragma once

#include <iostream>
#include <string_view>

namespace sarcaug::detail {

inline void warn(std::string_view msg) { std::cerr << "warning: " << msg << "\n"; }

// Progress/status lines; stderr so piped stdout stays machine-readable.
inline void info(std::string_view msg) { std::cerr << msg << "\n"; }

}  // namespace sarcaug::detail
