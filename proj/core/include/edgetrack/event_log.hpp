#pragma once

#include <string>
#include <vector>

#include "edgetrack/types.hpp"

namespace edgetrack {

enum class EventKind {
  Activation,       // node window granted (initial / case1 / case2 / merge)
  Frame,            // one processed frame with at least one detected vehicle
  SuspectAdded,     // plate entered a branch's suspected set
  SuspectDropped,   // plate eliminated by a finer-granularity reject
  Confirm,          // target identified at a node
  BranchSpawn,      // child branch created toward a successor node
  BranchTerminate,  // branch retired (confirm elsewhere / period end / exit)
  VoiExit,          // target's trajectory left the monitored area
  RunError,         // non-fatal inconsistency (e.g. degenerate window)
};

const char* to_string(EventKind kind);

/// One line-delimited tracking event. Unused reference fields stay at -1.
struct LogEvent {
  Seconds time = 0.0;
  EventKind kind = EventKind::Activation;
  int voi = -1;
  int branch = -1;
  IntersectionId node = kNoIntersection;

  // payload, populated per kind
  Seconds window_start = 0.0;
  Seconds window_end = 0.0;
  std::string text;       // activation case, termination reason, plate, error
  int detected = 0;       // Frame: vehicles in frame
  int model_tasks = 0;    // Frame: tasks granted at least model/make
  int full_tasks = 0;     // Frame: tasks granted full re-identification
  bool crowded = false;   // Frame: some task below full granularity
  Seconds exec_cost = 0.0;  // Frame: admitted execution seconds
  Seconds completion = 0.0; // Confirm: bound on the confirming task's finish
  Seconds arrival = 0.0;    // Confirm: target's arrival at the node
};

/// Ordered event record of one tracking run; timestamps never decrease.
class TrackingEventLog {
 public:
  void append(LogEvent event);
  const std::vector<LogEvent>& events() const { return events_; }
  bool empty() const { return events_.empty(); }

  /// Stable line format (tab-separated, fixed key order); reruns with the
  /// same seed serialize byte-identically.
  std::string to_text() const;

 private:
  std::vector<LogEvent> events_;
};

std::string to_line(const LogEvent& event);

}  // namespace edgetrack
