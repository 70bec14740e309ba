#pragma once

#include <limits>
#include <string>
#include <vector>

#include "edgetrack/reid.hpp"
#include "edgetrack/types.hpp"

namespace edgetrack {

/// Periodic re-identification task: one detected vehicle, one job per frame.
struct RtTask {
  int task_id = 0;
  Seconds exec_time = 0.0;  // per-job execution requirement
  Seconds period = 0.0;     // frame period, shared by every task on the node

  double utilization() const { return exec_time / period; }
};

/// Task system on one edge node: n per-vehicle tasks sharing a frame period,
/// scheduled FIFO on M identical processors.
struct TaskSet {
  std::vector<RtTask> tasks;
  int processors = 1;

  std::size_t size() const { return tasks.size(); }
  double total_utilization() const;
  Seconds period() const { return tasks.empty() ? 0.0 : tasks.front().period; }
};

/// Violations of the periodic task model's validity conditions (per-task
/// utilization at most 1, total utilization at most M, shared period).
/// The analytical bound is only meaningful when this is empty.
std::vector<std::string> model_violations(const TaskSet& ts);

inline constexpr Seconds kInfiniteBound = std::numeric_limits<Seconds>::infinity();

/// Analytical completion-time bound under global FIFO, evaluated directly:
///   p + e_i + (sum of the min(M-1, n) largest execution costs - e_i)
///             / (M - sum of the min(M-1, n) largest utilizations)
/// The numerator is floored at zero; a non-positive denominator yields an
/// infinite bound. Exposed unmodified for audit.
Seconds completion_bound_raw(const TaskSet& ts, std::size_t task_index);

/// Bound used for admission decisions: when n <= M every task runs on a
/// dedicated processor, so the bound is capped at p + e_i there.
Seconds completion_bound(const TaskSet& ts, std::size_t task_index);

/// Per-task bounds plus feasibility against the node's relative deadline.
struct BoundReport {
  std::vector<Seconds> bounds;       // capped bounds, one per task
  std::vector<Seconds> bounds_raw;   // direct formula values
  std::vector<bool> meets_deadline;  // bound <= deadline
  bool all_feasible = false;
};

BoundReport bound_report(const TaskSet& ts, Seconds deadline);

/// Cascade layers granted to the n per-vehicle tasks of one frame. Upgrades
/// go to the lowest task ids first: tasks [0, model_upgrades) run at least
/// model/make matching, and when every task reached that layer, tasks
/// [0, full_upgrades) additionally run full re-identification.
struct GranularityAssignment {
  int task_count = 0;
  int model_upgrades = 0;
  int full_upgrades = 0;

  Granularity granularity_of(int task_id) const;
  Seconds total_exec(const CascadeProfile& profile) const;
  /// A frame is crowded when at least one task was denied the full layer.
  bool crowded() const { return !(model_upgrades == task_count && full_upgrades == task_count); }

  friend bool operator==(const GranularityAssignment&, const GranularityAssignment&) = default;
};

/// Builds the task set realizing an assignment (used by the admission search,
/// the post-hoc deadline audit, and tests).
TaskSet make_taskset(const GranularityAssignment& a, const CascadeProfile& profile, int processors,
                     Seconds period);

/// Whether a granularity selection can be granted: with more tasks than
/// processors the task model must be valid (per-task utilization <= 1, total
/// <= M) and every completion bound must meet the deadline; with n <= M the
/// dedicated-processor bound p + e_i applies regardless of utilization.
bool admission_feasible(const GranularityAssignment& a, const CascadeProfile& profile,
                        int processors, Seconds period, Seconds deadline);

/// Two-iteration execution-time maximization for one frame with n detected
/// vehicles: first grant model/make matching to as many tasks as stay within
/// the deadline bound; if all n get it, grant full re-identification the same
/// way. Tasks are interchangeable, so each iteration is a monotone count
/// search. Throws InfeasibleError when even color-only matching misses the
/// deadline.
GranularityAssignment admission_control(int vehicle_count, const CascadeProfile& profile,
                                        int processors, Seconds period, Seconds deadline);

/// Event-driven simulation of M processors serving synchronously released
/// periodic jobs in release order (ties by task id); successive jobs of one
/// task never overlap. Returns the worst observed response time per task.
/// Horizon must cover at least three periods.
std::vector<Seconds> fifo_simulate(const TaskSet& ts, Seconds horizon);

}  // namespace edgetrack
