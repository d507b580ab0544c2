#pragma once

#include <cstdio>
#include <span>
#include <string>

namespace fsmacwt {

/// 12 significant digits, '.' separator, negative zero printed as 0.
inline std::string format_number(double v, int digits = 12) {
  if (v == 0.0) v = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

/// Space-separated list, used for flattened probability vectors inside one CSV field.
inline std::string format_list(std::span<const double> values, int digits = 12) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ' ';
    out += format_number(values[i], digits);
  }
  return out;
}

}  // namespace fsmacwt
