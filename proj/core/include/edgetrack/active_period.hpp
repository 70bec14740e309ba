#pragma once

#include <vector>

#include "edgetrack/road_network.hpp"
#include "edgetrack/types.hpp"

namespace edgetrack {

/// Time window during which an edge node must process frames so that every
/// possible transit of the target vehicle is covered.
struct ActivePeriod {
  Seconds start = 0.0;
  Seconds end = 0.0;

  bool valid() const { return start < end; }
  bool contains(Seconds t) const { return start <= t && t <= end; }
  bool contains(Seconds a, Seconds b) const { return start <= a && b <= end; }
  bool overlaps_or_touches(const ActivePeriod& o) const { return start <= o.end && o.start <= end; }

  friend bool operator==(const ActivePeriod&, const ActivePeriod&) = default;
};

/// Window of the first activated node: from the report instant until the
/// longest possible stay plus the node's processing deadline has elapsed.
/// Throws if the origin has no outgoing segment (no deadline exists).
ActivePeriod initial_active_period(IntersectionId origin, Seconds report_time,
                                   const RoadNetwork& net);

/// Successor window when the vehicle was identified at the predecessor and
/// departed it at `departure`:
///   [departure + seg.lo, departure + seg.hi + dwell_next.hi + deadline_next].
/// Throws on a degenerate (empty) window.
ActivePeriod propagate_case1(Seconds departure, TravelInterval segment, TravelInterval dwell_next,
                             Seconds deadline_next);

/// Successor window when the predecessor could not pin the vehicle down and
/// only its own active period is known:
///   start = prev.start + dwell_pred.lo + seg.lo
///   end   = prev.end - deadline_pred + dwell_next.hi + seg.hi + deadline_next
/// With literal_next_dwell set, the start instead uses dwell_next.lo (the
/// formula variant where the successor's own minimum stay is charged before
/// arrival). Throws on an empty window.
ActivePeriod propagate_case2(const ActivePeriod& prev, Seconds deadline_pred,
                             TravelInterval dwell_pred, TravelInterval segment,
                             TravelInterval dwell_next, Seconds deadline_next,
                             bool literal_next_dwell = false);

/// Interval union: overlapping or touching periods merge; disjoint ones stay
/// separate. Result sorted by start.
std::vector<ActivePeriod> merge_periods(std::vector<ActivePeriod> periods);

}  // namespace edgetrack
