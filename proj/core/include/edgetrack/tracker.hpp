#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "edgetrack/active_period.hpp"
#include "edgetrack/event_log.hpp"
#include "edgetrack/reid.hpp"
#include "edgetrack/road_network.hpp"
#include "edgetrack/rt_control.hpp"
#include "edgetrack/stats.hpp"
#include "edgetrack/trajectory.hpp"

namespace edgetrack {

/// One tracking query: what to look for, where it was reported, when.
struct VoiQuery {
  VehicleAttributes voi;
  IntersectionId origin = kNoIntersection;
  Seconds report_time = 0.0;
};

struct TrackerConfig {
  Seconds frame_period = 1.0 / 24.0;
  int processors = 20;
  CascadeProfile profile = default_profile();
  bool case2_literal_dwell = false;
  /// Hard stop: no frame beyond this instant is processed.
  Seconds horizon = 1e18;
};

/// Identification event: the target was matched at full granularity at a
/// node; `completion` bounds when the confirming task's result is available.
struct ConfirmRecord {
  IntersectionId node = kNoIntersection;
  Seconds arrival = 0.0;     // target's ground-truth arrival at the node
  Seconds frame_time = 0.0;  // frame that produced the confirm
  Seconds completion = 0.0;  // frame_time + completion bound of the task
};

/// Re-identification latency charged to one visited intersection: time from
/// arrival there to the completion of the first confirmation at or after it.
/// Unset when the run never confirmed the target again.
struct VisitDelay {
  IntersectionId node = kNoIntersection;
  Seconds arrival = 0.0;
  std::optional<Seconds> delay;
};

struct VoiRunResult {
  VoiQuery query;
  std::string plate;
  Trajectory trail;  // ground-truth route suffix from the origin visit
  std::string status;
  std::vector<ConfirmRecord> confirms;
  std::vector<VisitDelay> visit_delays;
  std::set<IntersectionId> involved_nodes;
  /// Final activation windows per node, merged.
  std::map<IntersectionId, std::vector<ActivePeriod>> activations;
};

struct RunResult {
  TrackingEventLog log;
  std::vector<VoiRunResult> vois;
  Seconds total_exec_cost = 0.0;    // admitted execution seconds, shared per frame
  Seconds total_active_time = 0.0;  // processed node-frame time, shared per frame
  std::map<int, Seconds> hourly_exec_cost;  // hour-of-day -> execution seconds
  bool infeasible = false;
  std::string diagnostic;  // infeasible: names the intersection and frame
};

/// Frame-by-frame tracking simulation. Activates the origin node of every
/// query, picks per-frame granularities through admission control, matches
/// detected vehicles against each query, spawns suspect branches toward the
/// successors suspects depart to, and terminates sibling branches once a
/// query's vehicle is confirmed. Frame processing at a node is shared across
/// queries and branches; its cost counts once.
RunResult run(const RoadNetwork& net, const std::vector<Trajectory>& trajectories,
              const std::map<std::string, VehicleAttributes>& attributes,
              const std::vector<VoiQuery>& queries, const TrackerConfig& cfg);

struct CoverageAudit {
  bool ok = true;
  std::vector<std::string> failures;
};

/// Replays the event log against one query's ground-truth route: every visit
/// must lie inside an activation window logged for that query at that node,
/// and every frame processed at a visited node must have had all its admitted
/// tasks within the node's deadline (re-derived through the completion bound).
CoverageAudit no_tracking_loss_check(const TrackingEventLog& log, int voi_index,
                                     const Trajectory& trail, const RoadNetwork& net,
                                     const TrackerConfig& cfg);

}  // namespace edgetrack
