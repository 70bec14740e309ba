#include "edgetrack/types.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace edgetrack {

Seconds canonical_time(Seconds t) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", t);
  return std::strtod(buf, nullptr);
}

int hour_of_day(Seconds t) {
  long long hour = static_cast<long long>(std::floor(t / 3600.0));
  long long h = hour % 24;
  if (h < 0) h += 24;
  return static_cast<int>(h);
}

std::string format_seconds(Seconds value, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, value);
  return buf;
}

}  // namespace edgetrack
