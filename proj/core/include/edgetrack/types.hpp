#pragma once

#include <cstdint>
#include <string>

namespace edgetrack {

/// Absolute timestamps (epoch seconds, local clock) and durations share one unit.
using Seconds = double;

using IntersectionId = std::int64_t;

inline constexpr IntersectionId kNoIntersection = -1;

/// Closed [lo, hi] range of observed travel or dwell times, in seconds.
struct TravelInterval {
  Seconds lo = 0.0;
  Seconds hi = 0.0;

  bool valid() const { return lo > 0.0 && lo <= hi; }
  bool contains(Seconds t) const { return lo <= t && t <= hi; }
  Seconds width() const { return hi - lo; }

  friend bool operator==(const TravelInterval&, const TravelInterval&) = default;
};

/// Millisecond-resolution timestamp canonicalization. Timestamps written to
/// the trajectory file format are formatted with three decimals; values run
/// through this function survive a serialize/parse cycle bit-exactly.
Seconds canonical_time(Seconds t);

/// Hour-of-day bucket (0..23) of an absolute timestamp.
int hour_of_day(Seconds t);

/// Fixed-precision decimal formatting used by all file emitters, so that
/// reruns produce byte-identical output.
std::string format_seconds(Seconds value, int precision = 6);

}  // namespace edgetrack
