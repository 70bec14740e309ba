#include "edgetrack/rt_control.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <queue>
#include <set>
#include <stdexcept>

#include "edgetrack/errors.hpp"

namespace edgetrack {

double TaskSet::total_utilization() const {
  double u = 0.0;
  for (const RtTask& t : tasks) u += t.utilization();
  return u;
}

std::vector<std::string> model_violations(const TaskSet& ts) {
  std::vector<std::string> out;
  if (ts.processors < 1) out.push_back("processor count must be positive");
  Seconds p = ts.period();
  for (const RtTask& t : ts.tasks) {
    if (!(t.exec_time > 0.0)) out.push_back("task " + std::to_string(t.task_id) + ": non-positive execution time");
    if (!(t.period > 0.0)) out.push_back("task " + std::to_string(t.task_id) + ": non-positive period");
    if (t.period != p) out.push_back("task " + std::to_string(t.task_id) + ": period differs from task 0");
    if (t.utilization() > 1.0 + 1e-12)
      out.push_back("task " + std::to_string(t.task_id) + ": utilization exceeds 1");
  }
  if (ts.total_utilization() > ts.processors + 1e-9)
    out.push_back("total utilization exceeds processor count");
  return out;
}

namespace {

// Sum of the min(M-1, n) largest values.
double top_sum(std::vector<double> values, int m_minus_1) {
  std::size_t k = std::min<std::size_t>(values.size(), std::max(m_minus_1, 0));
  if (k == 0) return 0.0;
  std::partial_sort(values.begin(), values.begin() + k, values.end(), std::greater<>());
  double s = 0.0;
  for (std::size_t i = 0; i < k; ++i) s += values[i];
  return s;
}

}  // namespace

Seconds completion_bound_raw(const TaskSet& ts, std::size_t task_index) {
  if (task_index >= ts.tasks.size()) throw std::out_of_range("task index");
  const RtTask& task = ts.tasks[task_index];
  std::vector<double> execs, utils;
  execs.reserve(ts.tasks.size());
  utils.reserve(ts.tasks.size());
  for (const RtTask& t : ts.tasks) {
    execs.push_back(t.exec_time);
    utils.push_back(t.utilization());
  }
  double exec_top = top_sum(std::move(execs), ts.processors - 1);
  double util_top = top_sum(std::move(utils), ts.processors - 1);
  double numerator = std::max(exec_top - task.exec_time, 0.0);
  if (numerator == 0.0) return task.period + task.exec_time;  // fraction is exactly zero
  double denominator = ts.processors - util_top;
  if (denominator <= 0.0) return kInfiniteBound;
  return task.period + task.exec_time + numerator / denominator;
}

Seconds completion_bound(const TaskSet& ts, std::size_t task_index) {
  Seconds raw = completion_bound_raw(ts, task_index);
  const RtTask& task = ts.tasks[task_index];
  if (ts.tasks.size() <= static_cast<std::size_t>(ts.processors))
    return std::min(raw, task.period + task.exec_time);
  return raw;
}

BoundReport bound_report(const TaskSet& ts, Seconds deadline) {
  BoundReport report;
  report.all_feasible = true;
  for (std::size_t i = 0; i < ts.tasks.size(); ++i) {
    report.bounds.push_back(completion_bound(ts, i));
    report.bounds_raw.push_back(completion_bound_raw(ts, i));
    bool ok = report.bounds.back() <= deadline;
    report.meets_deadline.push_back(ok);
    report.all_feasible = report.all_feasible && ok;
  }
  return report;
}

Granularity GranularityAssignment::granularity_of(int task_id) const {
  if (model_upgrades == task_count && task_id < full_upgrades) return Granularity::Full;
  if (task_id < model_upgrades) return Granularity::ModelMake;
  return Granularity::Color;
}

Seconds GranularityAssignment::total_exec(const CascadeProfile& profile) const {
  Seconds total = 0.0;
  for (int i = 0; i < task_count; ++i) total += profile.cumulative_cost(granularity_of(i));
  return total;
}

TaskSet make_taskset(const GranularityAssignment& a, const CascadeProfile& profile, int processors,
                     Seconds period) {
  TaskSet ts;
  ts.processors = processors;
  ts.tasks.reserve(a.task_count);
  for (int i = 0; i < a.task_count; ++i)
    ts.tasks.push_back(RtTask{i, profile.cumulative_cost(a.granularity_of(i)), period});
  return ts;
}

bool admission_feasible(const GranularityAssignment& a, const CascadeProfile& profile,
                        int processors, Seconds period, Seconds deadline) {
  TaskSet ts = make_taskset(a, profile, processors, period);
  if (ts.tasks.size() > static_cast<std::size_t>(processors)) {
    // Shared regime: the queueing bound is only meaningful for a valid task
    // model. Beyond it the backlog grows without limit, so such a selection
    // can never be granted.
    for (const RtTask& t : ts.tasks)
      if (t.utilization() > 1.0 + 1e-12) return false;
    if (ts.total_utilization() > processors + 1e-9) return false;
  }
  // With n <= M each task owns a processor and the capped bound p + e_i
  // applies regardless of utilization.
  for (std::size_t i = 0; i < ts.tasks.size(); ++i) {
    if (!(completion_bound(ts, i) <= deadline)) return false;
  }
  return true;
}

namespace {

// Largest upgrade count in [0, n] that stays feasible. Feasibility is monotone
// (upgrades only ever raise bounds), so binary search applies.
int max_feasible_upgrades(int n, const CascadeProfile& profile, int processors, Seconds period,
                          Seconds deadline, bool second_iteration) {
  auto feasible = [&](int count) {
    GranularityAssignment a;
    a.task_count = n;
    a.model_upgrades = second_iteration ? n : count;
    a.full_upgrades = second_iteration ? count : 0;
    return admission_feasible(a, profile, processors, period, deadline);
  };
  int lo = 0, hi = n;
  while (lo < hi) {
    int mid = lo + (hi - lo + 1) / 2;
    if (feasible(mid))
      lo = mid;
    else
      hi = mid - 1;
  }
  return lo;
}

}  // namespace

GranularityAssignment admission_control(int vehicle_count, const CascadeProfile& profile,
                                        int processors, Seconds period, Seconds deadline) {
  if (vehicle_count < 1) throw std::invalid_argument("admission_control requires at least one vehicle");
  if (!profile.valid()) throw std::invalid_argument("invalid cascade profile");
  if (processors < 1) throw std::invalid_argument("processor count must be positive");
  if (!(period > 0.0)) throw std::invalid_argument("period must be positive");

  GranularityAssignment result;
  result.task_count = vehicle_count;
  if (!admission_feasible(result, profile, processors, period, deadline))
    throw InfeasibleError("edge node overloaded beyond model assumptions: " +
                          std::to_string(vehicle_count) + " tasks miss the deadline at color granularity");

  result.model_upgrades =
      max_feasible_upgrades(vehicle_count, profile, processors, period, deadline, false);
  if (result.model_upgrades == vehicle_count) {
    result.full_upgrades =
        max_feasible_upgrades(vehicle_count, profile, processors, period, deadline, true);
  }
  return result;
}

std::vector<Seconds> fifo_simulate(const TaskSet& ts, Seconds horizon) {
  const Seconds p = ts.period();
  if (ts.tasks.empty()) return {};
  if (!(p > 0.0)) throw std::invalid_argument("fifo_simulate: non-positive period");
  if (horizon < 3.0 * p) throw std::invalid_argument("fifo_simulate: horizon must cover >= 3 periods");

  const std::size_t n = ts.tasks.size();
  const long frames = std::max<long>(static_cast<long>(horizon / p), 3);
  std::vector<Seconds> worst(n, 0.0);

  // Each task presents one job at a time (successive jobs of a task execute
  // in sequence). A job is eligible at max(release, predecessor completion);
  // a freed processor takes the eligible job with the earliest release, ties
  // by task id, and idles only when no job is eligible.
  struct Upcoming {
    Seconds when;  // eligibility instant
    long frame;
    int id;
    bool operator>(const Upcoming& o) const {
      if (when != o.when) return when > o.when;
      if (frame != o.frame) return frame > o.frame;
      return id > o.id;
    }
  };
  std::priority_queue<Upcoming, std::vector<Upcoming>, std::greater<>> upcoming;
  std::set<std::pair<long, int>> eligible;  // (frame, id): release order, ties by id
  std::priority_queue<Seconds, std::vector<Seconds>, std::greater<>> proc_free;

  for (std::size_t i = 0; i < n; ++i) eligible.insert({0, static_cast<int>(i)});
  for (int m = 0; m < ts.processors; ++m) proc_free.push(0.0);

  long remaining = static_cast<long>(n) * frames;
  while (remaining > 0) {
    Seconds t = proc_free.top();
    if (eligible.empty()) {
      t = std::max(t, upcoming.top().when);
    }
    while (!upcoming.empty() && upcoming.top().when <= t) {
      eligible.insert({upcoming.top().frame, upcoming.top().id});
      upcoming.pop();
    }
    auto [frame, id] = *eligible.begin();
    eligible.erase(eligible.begin());
    proc_free.pop();

    Seconds release = static_cast<Seconds>(frame) * p;
    Seconds done = t + ts.tasks[id].exec_time;
    proc_free.push(done);
    worst[id] = std::max(worst[id], done - release);
    --remaining;

    if (frame + 1 < frames) {
      Seconds next_release = static_cast<Seconds>(frame + 1) * p;
      upcoming.push(Upcoming{std::max(next_release, done), frame + 1, id});
    }
  }
  return worst;
}

}  // namespace edgetrack
