#include "edgetrack/active_period.hpp"

#include <algorithm>
#include <stdexcept>

namespace edgetrack {

namespace {

ActivePeriod check(ActivePeriod p, const char* what) {
  if (!p.valid())
    throw std::domain_error(std::string(what) + ": invalid active period [" +
                            format_seconds(p.start, 3) + ", " + format_seconds(p.end, 3) + "]");
  return p;
}

}  // namespace

ActivePeriod initial_active_period(IntersectionId origin, Seconds report_time,
                                   const RoadNetwork& net) {
  Seconds deadline = net.relative_deadline(origin);  // throws on dead-end origin
  const TravelInterval& dwell = net.dwell(origin);
  return check({report_time, report_time + dwell.hi + deadline}, "initial_active_period");
}

ActivePeriod propagate_case1(Seconds departure, TravelInterval segment, TravelInterval dwell_next,
                             Seconds deadline_next) {
  ActivePeriod p;
  p.start = departure + segment.lo;
  p.end = departure + segment.hi + dwell_next.hi + deadline_next;
  return check(p, "propagate_case1");
}

ActivePeriod propagate_case2(const ActivePeriod& prev, Seconds deadline_pred,
                             TravelInterval dwell_pred, TravelInterval segment,
                             TravelInterval dwell_next, Seconds deadline_next,
                             bool literal_next_dwell) {
  ActivePeriod p;
  Seconds entry_dwell = literal_next_dwell ? dwell_next.lo : dwell_pred.lo;
  p.start = prev.start + entry_dwell + segment.lo;
  p.end = prev.end - deadline_pred + dwell_next.hi + segment.hi + deadline_next;
  return check(p, "propagate_case2");
}

std::vector<ActivePeriod> merge_periods(std::vector<ActivePeriod> periods) {
  if (periods.empty()) return periods;
  std::sort(periods.begin(), periods.end(), [](const ActivePeriod& a, const ActivePeriod& b) {
    if (a.start != b.start) return a.start < b.start;
    return a.end < b.end;
  });
  std::vector<ActivePeriod> out;
  out.push_back(periods.front());
  for (std::size_t i = 1; i < periods.size(); ++i) {
    if (periods[i].start <= out.back().end) {
      out.back().end = std::max(out.back().end, periods[i].end);
    } else {
      out.push_back(periods[i]);
    }
  }
  return out;
}

}  // namespace edgetrack
