#include "zmest/common.hpp"

#include <cmath>
#include <cstdio>

namespace zmest {

std::string format_value(double v) {
  if (std::isnan(v)) return "nan";
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace zmest
