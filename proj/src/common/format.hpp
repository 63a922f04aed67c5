#pragma once

#include <cstdio>
#include <string>

namespace magcurv {

// Round-trip decimal form used by every CSV writer.
inline std::string fmt(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

}  // namespace magcurv
