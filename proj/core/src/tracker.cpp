#include "edgetrack/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "edgetrack/errors.hpp"

namespace edgetrack {

namespace {

constexpr Seconds kNever = 1e300;

struct Departure {
  Seconds leave = 0.0;
  std::string plate;
  IntersectionId to = kNoIntersection;  // kNoIntersection: vehicle exits the area
};

struct Episode {
  int branch_id = 0;
  int voi = 0;
  IntersectionId node = kNoIntersection;
  ActivePeriod window;        // logged coverage window (grows on merges)
  Seconds processing_start = 0.0;
  Seconds processing_end = 0.0;
  long next_frame = 0;        // global frame-grid index
  std::size_t dep_cursor = 0;
  std::set<std::string> suspects;
  std::map<IntersectionId, int> spawned_to;  // successor -> child branch id
  bool confirmed = false;
  bool done = false;
  bool announced = false;     // activation event emitted
  Seconds announce_time = 0.0;
  int parent = -1;
  std::string termination_reason = "period_end";
};

long first_frame_at_or_after(Seconds t, Seconds p) {
  return static_cast<long>(std::ceil(t / p - 1e-9));
}

}  // namespace

RunResult run(const RoadNetwork& net, const std::vector<Trajectory>& trajectories,
              const std::map<std::string, VehicleAttributes>& attributes,
              const std::vector<VoiQuery>& queries, const TrackerConfig& cfg) {
  const Seconds p = cfg.frame_period;
  if (!(p > 0.0)) throw InputError("tracker: frame period must be positive");
  if (!cfg.profile.valid()) throw InputError("tracker: invalid cascade profile");

  RunResult result;

  // --- resolve each query to its vehicle and ground-truth route suffix ---
  std::map<std::string, const Trajectory*> by_plate;
  for (const Trajectory& t : trajectories) by_plate[t.plate_id] = &t;

  for (std::size_t qi = 0; qi < queries.size(); ++qi) {
    const VoiQuery& q = queries[qi];
    VoiRunResult vr;
    vr.query = q;
    for (const auto& [plate, attrs] : attributes) {
      if (attrs.identity == q.voi.identity) {
        vr.plate = plate;
        break;
      }
    }
    if (vr.plate.empty())
      throw InputError("query " + std::to_string(qi) + ": no vehicle with identity '" +
                       q.voi.identity + "'");
    auto traj = by_plate.find(vr.plate);
    if (traj == by_plate.end())
      throw InputError("query " + std::to_string(qi) + ": vehicle has no trajectory");
    const std::vector<Visit>& visits = traj->second->visits;
    std::size_t at = visits.size();
    for (std::size_t i = 0; i < visits.size(); ++i) {
      if (visits[i].intersection == q.origin && visits[i].enter >= q.report_time - 1e-9) {
        at = i;
        break;
      }
    }
    if (at == visits.size())
      throw InputError("query " + std::to_string(qi) + ": vehicle never passes intersection " +
                       std::to_string(q.origin) + " after the report time");
    vr.trail.plate_id = vr.plate;
    vr.trail.visits.assign(visits.begin() + static_cast<long>(at), visits.end());
    vr.status = "tracking";
    result.vois.push_back(std::move(vr));
  }

  // --- ground-truth departures per node, time-ordered ---
  std::map<IntersectionId, std::vector<Departure>> departures;
  for (const Trajectory& t : trajectories) {
    for (std::size_t i = 0; i < t.visits.size(); ++i) {
      const Visit& v = t.visits[i];
      IntersectionId to =
          i + 1 < t.visits.size() ? t.visits[i + 1].intersection : kNoIntersection;
      departures[v.intersection].push_back(Departure{v.leave, t.plate_id, to});
    }
  }
  for (auto& [node, list] : departures) {
    std::sort(list.begin(), list.end(), [](const Departure& a, const Departure& b) {
      if (a.leave != b.leave) return a.leave < b.leave;
      return a.plate < b.plate;
    });
  }

  TrafficTimeline timeline(trajectories, 3600.0, 0.0);

  // deque: spawning during iteration must not invalidate references
  std::deque<Episode> episodes;
  // indices of not-yet-retired episodes, in creation (branch id) order
  std::vector<std::size_t> alive;
  std::map<std::pair<int, IntersectionId>, std::vector<ActivePeriod>> logged_windows;

  auto log_activation = [&](Seconds t, const Episode& e, const char* how) {
    LogEvent ev;
    ev.time = t;
    ev.kind = EventKind::Activation;
    ev.voi = e.voi;
    ev.branch = e.branch_id;
    ev.node = e.node;
    ev.window_start = e.window.start;
    ev.window_end = e.window.end;
    ev.text = how;
    result.log.append(ev);
    logged_windows[{e.voi, e.node}].push_back(e.window);
    result.vois[static_cast<std::size_t>(e.voi)].involved_nodes.insert(e.node);
  };

  auto dep_begin = [&](const Episode& e) {
    auto it = departures.find(e.node);
    if (it == departures.end()) return std::size_t{0};
    const std::vector<Departure>& list = it->second;
    return static_cast<std::size_t>(
        std::lower_bound(list.begin(), list.end(), e.processing_start,
                         [](const Departure& d, Seconds t) { return d.leave < t; }) -
        list.begin());
  };

  auto make_episode = [&](int voi, IntersectionId node, ActivePeriod window, Seconds request,
                          int parent, std::set<std::string> suspects) {
    Episode e;
    e.branch_id = static_cast<int>(episodes.size());
    e.voi = voi;
    e.node = node;
    e.window = window;
    e.processing_start = std::max(window.start, request);
    e.processing_end = window.end;
    e.next_frame = first_frame_at_or_after(e.processing_start, p);
    e.parent = parent;
    e.suspects = std::move(suspects);
    e.dep_cursor = dep_begin(e);
    episodes.push_back(std::move(e));
    alive.push_back(episodes.size() - 1);
    return episodes.size() - 1;
  };

  // --- origin activations (announced in time order by the event loop) ---
  for (std::size_t qi = 0; qi < queries.size(); ++qi) {
    const VoiQuery& q = queries[qi];
    ActivePeriod w = initial_active_period(q.origin, q.report_time, net);  // throws on dead end
    std::size_t idx = make_episode(static_cast<int>(qi), q.origin, w, q.report_time, -1,
                                   {result.vois[qi].plate});
    episodes[idx].announce_time = q.report_time;
    result.vois[qi].involved_nodes.insert(q.origin);
  }

  // deadline and admission caches
  std::map<IntersectionId, Seconds> deadline_cache;
  auto deadline_of = [&](IntersectionId node) -> std::optional<Seconds> {
    auto it = deadline_cache.find(node);
    if (it != deadline_cache.end()) return it->second >= 0 ? std::optional<Seconds>(it->second)
                                                           : std::nullopt;
    std::optional<Seconds> d;
    try {
      d = net.relative_deadline(node);
    } catch (const std::invalid_argument&) {
      d = std::nullopt;
    }
    deadline_cache[node] = d ? *d : -1.0;
    return d;
  };
  std::map<std::pair<IntersectionId, int>, GranularityAssignment> admission_cache;

  auto terminate = [&](Episode& e, Seconds t, const std::string& reason) {
    if (e.done) return;
    e.done = true;
    e.termination_reason = reason;
    LogEvent ev;
    ev.time = t;
    ev.kind = EventKind::BranchTerminate;
    ev.voi = e.voi;
    ev.branch = e.branch_id;
    ev.node = e.node;
    ev.text = "reason=" + reason;
    result.log.append(ev);
  };

  auto log_suspect = [&](Seconds t, const Episode& e, const std::string& plate, bool added) {
    LogEvent ev;
    ev.time = t;
    ev.kind = added ? EventKind::SuspectAdded : EventKind::SuspectDropped;
    ev.voi = e.voi;
    ev.branch = e.branch_id;
    ev.node = e.node;
    ev.text = plate;
    result.log.append(ev);
  };

  auto run_error = [&](Seconds t, int voi, int branch, IntersectionId node, const std::string& msg) {
    LogEvent ev;
    ev.time = t;
    ev.kind = EventKind::RunError;
    ev.voi = voi;
    ev.branch = branch;
    ev.node = node;
    ev.text = msg;
    result.log.append(ev);
  };

  // spawn or extend coverage of (voi, successor); `suspect` rides along
  auto spawn_or_merge = [&](Episode& from, IntersectionId to, ActivePeriod window, Seconds t,
                            const std::string& suspect) {
    for (std::size_t idx : alive) {
      Episode& e = episodes[idx];
      if (e.done || e.voi != from.voi || e.node != to || e.confirmed) continue;
      if (e.window.overlaps_or_touches(window)) {
        e.window.start = std::min(e.window.start, window.start);
        e.window.end = std::max(e.window.end, window.end);
        e.processing_end = std::max(e.processing_end, e.window.end);
        bool added = e.suspects.insert(suspect).second;
        log_activation(t, e, "merge");
        if (added) log_suspect(t, e, suspect, true);
        from.spawned_to[to] = e.branch_id;
        return;
      }
    }
    if (window.end <= t) {
      run_error(t, from.voi, from.branch_id, to, "successor window already elapsed");
      return;
    }
    std::size_t idx = make_episode(from.voi, to, window, t, from.branch_id, {suspect});
    from.spawned_to[to] = episodes[idx].branch_id;
    episodes[idx].announced = true;
    episodes[idx].announce_time = t;
    LogEvent ev;
    ev.time = t;
    ev.kind = EventKind::BranchSpawn;
    ev.voi = from.voi;
    ev.branch = episodes[idx].branch_id;
    ev.node = from.node;
    ev.text = std::to_string(to);
    ev.window_start = window.start;
    ev.window_end = window.end;
    result.log.append(ev);
    log_activation(t, episodes[idx], from.confirmed ? "case1" : "case2");
    log_suspect(t, episodes[idx], suspect, true);
  };

  auto handle_departure = [&](std::size_t ei, const Departure& dep, Seconds t) {
    Episode& e = episodes[ei];
    const std::string& voi_plate = result.vois[static_cast<std::size_t>(e.voi)].plate;
    bool is_voi = dep.plate == voi_plate;
    if (e.confirmed) {
      if (!is_voi) return;
      if (dep.to == kNoIntersection) {
        LogEvent ev;
        ev.time = t;
        ev.kind = EventKind::VoiExit;
        ev.voi = e.voi;
        ev.branch = e.branch_id;
        ev.node = e.node;
        ev.text = "status=exited monitored area";
        result.log.append(ev);
        result.vois[static_cast<std::size_t>(e.voi)].status = "exited monitored area";
        for (std::size_t oidx : alive) {
          Episode& o = episodes[oidx];
          if (!o.done && o.voi == e.voi) terminate(o, t, "exit");
        }
        return;
      }
      auto deadline_next = deadline_of(dep.to);
      if (!deadline_next) {
        run_error(t, e.voi, e.branch_id, dep.to, "dead-end successor; cannot activate");
      } else {
        try {
          ActivePeriod w =
              propagate_case1(t, net.travel(e.node, dep.to), net.dwell(dep.to), *deadline_next);
          spawn_or_merge(e, dep.to, w, t, voi_plate);
        } catch (const std::domain_error& err) {
          run_error(t, e.voi, e.branch_id, dep.to, err.what());
        }
      }
      // identified vehicle left: this node's duty ends now
      e.processing_end = std::min(e.processing_end, t);
      e.termination_reason = "advanced";
      return;
    }
    if (!e.suspects.count(dep.plate)) return;
    if (dep.to == kNoIntersection) return;  // suspect left the area; nothing to cover
    if (e.spawned_to.count(dep.to)) {
      int child = e.spawned_to[dep.to];
      Episode& c = episodes[static_cast<std::size_t>(child)];
      if (!c.done && c.suspects.insert(dep.plate).second) log_suspect(t, c, dep.plate, true);
      if (!c.done) return;
      // fall through: window may still be live even though the child retired
    }
    auto deadline_next = deadline_of(dep.to);
    auto deadline_here = deadline_of(e.node);
    if (!deadline_next || !deadline_here) {
      run_error(t, e.voi, e.branch_id, dep.to, "dead-end successor; cannot activate");
      return;
    }
    try {
      ActivePeriod w = propagate_case2(e.window, *deadline_here, net.dwell(e.node),
                                       net.travel(e.node, dep.to), net.dwell(dep.to),
                                       *deadline_next, cfg.case2_literal_dwell);
      spawn_or_merge(e, dep.to, w, t, dep.plate);
    } catch (const std::domain_error& err) {
      run_error(t, e.voi, e.branch_id, dep.to, err.what());
    }
  };

  // --- main event loop: frames, then departures, then retirements ---
  while (true) {
    std::erase_if(alive, [&](std::size_t idx) { return episodes[idx].done; });

    Seconds t_frame = kNever, t_dep = kNever, t_ret = kNever, t_announce = kNever;
    for (std::size_t idx : alive) {
      const Episode& e = episodes[idx];
      Seconds ft = static_cast<Seconds>(e.next_frame) * p;
      if (ft <= e.processing_end && ft < t_frame) t_frame = ft;
      auto it = departures.find(e.node);
      if (it != departures.end() && e.dep_cursor < it->second.size()) {
        Seconds dt = it->second[e.dep_cursor].leave;
        if (dt <= e.processing_end && dt < t_dep) t_dep = dt;
      }
      t_ret = std::min(t_ret, e.processing_end);
      if (!e.announced) t_announce = std::min(t_announce, e.announce_time);
    }
    Seconds t = std::min({t_frame, t_dep, t_ret, t_announce});
    if (t >= kNever) break;
    if (t > cfg.horizon) {
      for (std::size_t idx : alive) terminate(episodes[idx], cfg.horizon, "horizon");
      break;
    }

    // activations due now precede any processing at this instant
    if (t_announce == t) {
      for (std::size_t idx : alive) {
        Episode& e = episodes[idx];
        if (!e.announced && e.announce_time <= t) {
          e.announced = true;
          log_activation(e.announce_time, e, "initial");
          for (const std::string& plate : e.suspects)
            log_suspect(e.announce_time, e, plate, true);
        }
      }
    }

    // frames
    if (t_frame == t) {
      std::vector<IntersectionId> nodes;
      for (std::size_t idx : alive) {
        const Episode& e = episodes[idx];
        if (!e.done && static_cast<Seconds>(e.next_frame) * p == t) nodes.push_back(e.node);
      }
      std::sort(nodes.begin(), nodes.end());
      nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

      for (IntersectionId node : nodes) {
        std::vector<std::string> plates = timeline.present(node, t);
        int n = static_cast<int>(plates.size());
        result.total_active_time += p;
        if (n == 0) continue;

        auto deadline = deadline_of(node);
        GranularityAssignment assignment;
        auto cache_key = std::make_pair(node, n);
        auto cached = admission_cache.find(cache_key);
        if (cached != admission_cache.end()) {
          assignment = cached->second;
        } else {
          try {
            assignment = admission_control(n, cfg.profile, cfg.processors, p,
                                           deadline ? *deadline : kNever);
          } catch (const InfeasibleError& err) {
            result.infeasible = true;
            result.diagnostic = "intersection " + std::to_string(node) + ", frame t=" +
                                format_seconds(t, 6) + ": " + err.what();
            run_error(t, -1, -1, node, result.diagnostic);
            for (Episode& e : episodes)
              if (!e.done) terminate(e, t, "infeasible");
            break;
          }
          admission_cache[cache_key] = assignment;
        }
        if (result.infeasible) break;

        Seconds cost = assignment.total_exec(cfg.profile);
        result.total_exec_cost += cost;
        result.hourly_exec_cost[hour_of_day(t)] += cost;

        LogEvent fe;
        fe.time = t;
        fe.kind = EventKind::Frame;
        fe.node = node;
        fe.detected = n;
        fe.model_tasks = assignment.model_upgrades;
        fe.full_tasks = assignment.full_upgrades;
        fe.crowded = assignment.crowded();
        fe.exec_cost = cost;
        result.log.append(fe);

        TaskSet frame_tasks = make_taskset(assignment, cfg.profile, cfg.processors, p);

        for (std::size_t idx : alive) {
          Episode& e = episodes[idx];
          if (e.done || e.node != node || static_cast<Seconds>(e.next_frame) * p != t) continue;
          VoiRunResult& vr = result.vois[static_cast<std::size_t>(e.voi)];
          const VehicleAttributes& voi_attrs = vr.query.voi;
          for (int idx = 0; idx < n; ++idx) {
            const std::string& plate = plates[static_cast<std::size_t>(idx)];
            Granularity g = assignment.granularity_of(idx);
            MatchOutcome outcome = match(g, attributes.at(plate), voi_attrs);
            if (outcome == MatchOutcome::Confirm && !e.confirmed) {
              e.confirmed = true;
              e.suspects = {plate};
              Seconds arrival = t;
              for (const Visit& v : vr.trail.visits) {
                if (v.intersection == node && v.enter <= t + 1e-9 && t <= v.leave + 1e-9) {
                  arrival = v.enter;
                  break;
                }
              }
              Seconds completion = t + completion_bound(frame_tasks, static_cast<std::size_t>(idx));
              vr.confirms.push_back(ConfirmRecord{node, arrival, t, completion});
              LogEvent ce;
              ce.time = t;
              ce.kind = EventKind::Confirm;
              ce.voi = e.voi;
              ce.branch = e.branch_id;
              ce.node = node;
              ce.text = plate;
              ce.arrival = arrival;
              ce.completion = completion;
              result.log.append(ce);
              for (std::size_t oidx : alive) {
                Episode& o = episodes[oidx];
                if (!o.done && o.voi == e.voi && o.branch_id != e.branch_id)
                  terminate(o, t, "confirm_elsewhere");
              }
            } else if (outcome == MatchOutcome::Suspect && !e.confirmed) {
              if (e.suspects.insert(plate).second) log_suspect(t, e, plate, true);
            } else if (outcome == MatchOutcome::Reject && !e.confirmed) {
              if (e.suspects.erase(plate) > 0) log_suspect(t, e, plate, false);
            }
          }
        }
      }
      if (result.infeasible) break;
      for (std::size_t idx : alive) {
        Episode& e = episodes[idx];
        if (!e.done && static_cast<Seconds>(e.next_frame) * p == t) ++e.next_frame;
      }
    }

    // departures due at exactly t (earlier ones were handled at earlier events)
    if (t_dep == t) {
      // spawns during this phase extend `alive`; new episodes start at or
      // after t, so visiting them in the same pass is a no-op
      for (std::size_t k = 0; k < alive.size(); ++k) {
        std::size_t ei = alive[k];
        if (episodes[ei].done) continue;
        auto it = departures.find(episodes[ei].node);
        if (it == departures.end()) continue;
        const std::vector<Departure>& list = it->second;
        while (!episodes[ei].done && episodes[ei].dep_cursor < list.size() &&
               list[episodes[ei].dep_cursor].leave <= t &&
               list[episodes[ei].dep_cursor].leave <= episodes[ei].processing_end) {
          std::size_t cursor = episodes[ei].dep_cursor++;
          handle_departure(ei, list[cursor], t);
        }
      }
    }

    // retirements
    for (std::size_t idx : alive) {
      Episode& e = episodes[idx];
      if (!e.done && e.processing_end <= t) terminate(e, t, e.termination_reason);
    }
  }

  // --- statuses, activations, per-visit delays ---
  for (std::size_t qi = 0; qi < result.vois.size(); ++qi) {
    VoiRunResult& vr = result.vois[qi];
    if (vr.status == "tracking") {
      Seconds last_leave = vr.trail.visits.empty() ? 0.0 : vr.trail.visits.back().leave;
      vr.status = last_leave <= cfg.horizon ? "exited monitored area" : "horizon reached";
    }
    for (const auto& [key, windows] : logged_windows) {
      if (key.first == static_cast<int>(qi))
        vr.activations[key.second] = merge_periods(windows);
    }
    std::vector<Seconds> completions;
    for (const ConfirmRecord& c : vr.confirms) completions.push_back(c.completion);
    std::sort(completions.begin(), completions.end());
    for (const Visit& v : vr.trail.visits) {
      VisitDelay d;
      d.node = v.intersection;
      d.arrival = v.enter;
      auto it = std::lower_bound(completions.begin(), completions.end(), v.enter);
      if (it != completions.end()) d.delay = *it - v.enter;
      vr.visit_delays.push_back(d);
    }
  }
  return result;
}

CoverageAudit no_tracking_loss_check(const TrackingEventLog& log, int voi_index,
                                     const Trajectory& trail, const RoadNetwork& net,
                                     const TrackerConfig& cfg) {
  CoverageAudit audit;
  std::map<IntersectionId, std::vector<ActivePeriod>> windows;
  for (const LogEvent& e : log.events()) {
    if (e.kind == EventKind::Activation && e.voi == voi_index)
      windows[e.node].push_back(ActivePeriod{e.window_start, e.window_end});
  }
  std::set<IntersectionId> visited;
  for (const Visit& v : trail.visits) {
    visited.insert(v.intersection);
    auto it = windows.find(v.intersection);
    bool covered = false;
    if (it != windows.end()) {
      for (const ActivePeriod& w : merge_periods(it->second)) {
        if (w.start <= v.enter + 1e-9 && v.leave <= w.end + 1e-9) {
          covered = true;
          break;
        }
      }
    }
    if (!covered) {
      audit.ok = false;
      audit.failures.push_back("visit at intersection " + std::to_string(v.intersection) + " [" +
                               format_seconds(v.enter, 3) + ", " + format_seconds(v.leave, 3) +
                               "] not inside any activation window");
    }
  }
  // deadline audit: every admitted frame at a visited node must be feasible
  for (const LogEvent& e : log.events()) {
    if (e.kind != EventKind::Frame || !visited.count(e.node)) continue;
    Seconds deadline;
    try {
      deadline = net.relative_deadline(e.node);
    } catch (const std::invalid_argument&) {
      continue;
    }
    GranularityAssignment a;
    a.task_count = e.detected;
    a.model_upgrades = e.model_tasks;
    a.full_upgrades = e.full_tasks;
    if (!admission_feasible(a, cfg.profile, cfg.processors, cfg.frame_period, deadline)) {
      audit.ok = false;
      audit.failures.push_back("frame at t=" + format_seconds(e.time, 6) + " intersection " +
                               std::to_string(e.node) +
                               ": admitted task set misses the deadline bound");
    }
  }
  return audit;
}

}  // namespace edgetrack
