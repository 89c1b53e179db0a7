#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace byzfusion {

/// Fixed 17-significant-digit rendering used for every emitted number, so
/// equal doubles always print to equal bytes.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace byzfusion
