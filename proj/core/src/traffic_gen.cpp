#include "edgetrack/traffic_gen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "edgetrack/errors.hpp"

namespace edgetrack {

namespace {

std::string make_plate(const char* prefix, std::size_t n) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%07zu", prefix, n);
  return buf;
}

std::string draw_value(const AttributeDistribution& dist, Rng& rng) {
  return dist.values[rng.weighted(dist.weights)];
}

// Random walk from `at` starting with the arrival instant; dwell and travel
// sampled uniformly within the network's intervals, next hop uniform over
// outgoing segments. Millisecond-quantized so the trajectory file format
// round-trips exactly.
std::vector<Visit> walk(const RoadNetwork& net, IntersectionId at, Seconds t,
                        const ScenarioConfig& cfg, Rng& rng) {
  std::vector<Visit> visits;
  for (int hop = 0; hop < cfg.max_hops; ++hop) {
    const TravelInterval& dwell = net.dwell(at);
    Visit v;
    v.intersection = at;
    v.enter = canonical_time(t);
    v.leave = canonical_time(t + rng.uniform(dwell.lo, dwell.hi));
    visits.push_back(v);
    std::vector<IntersectionId> next = net.neighbors(at);
    if (next.empty()) break;
    if (hop + 1 >= cfg.max_hops) break;
    if (!rng.bernoulli(cfg.trip_continue_prob)) break;
    IntersectionId to = next[rng.below(next.size())];
    const TravelInterval& seg = net.travel(at, to);
    t = v.leave + rng.uniform(seg.lo, seg.hi);
    at = to;
  }
  return visits;
}

// Deterministic route: dwell/travel still sampled, hops fixed.
std::vector<Visit> walk_path(const RoadNetwork& net, const std::vector<IntersectionId>& path,
                             Seconds t, Rng& rng) {
  std::vector<Visit> visits;
  for (std::size_t i = 0; i < path.size(); ++i) {
    const TravelInterval& dwell = net.dwell(path[i]);
    Visit v;
    v.intersection = path[i];
    v.enter = canonical_time(t);
    v.leave = canonical_time(t + rng.uniform(dwell.lo, dwell.hi));
    visits.push_back(v);
    if (i + 1 < path.size()) {
      const TravelInterval& seg = net.travel(path[i], path[i + 1]);
      t = v.leave + rng.uniform(seg.lo, seg.hi);
    }
  }
  return visits;
}

void require_valid(const RoadNetwork& net, const ScenarioConfig& cfg) {
  std::vector<std::string> problems = cfg.validate(net);
  if (!problems.empty()) {
    std::string msg = "invalid scenario config:";
    for (const std::string& p : problems) msg += "\n  - " + p;
    throw InputError(msg);
  }
}

}  // namespace

GenerateResult generate(const RoadNetwork& net, const ScenarioConfig& cfg) {
  require_valid(net, cfg);
  GenerateResult result;
  Rng root(cfg.seed);
  std::size_t plate_counter = 0;

  for (const auto& [node, dwell] : net.intersections()) {
    Rng stream = root.fork(0x4e4f4445ull ^ static_cast<std::uint64_t>(node) * 0x9e37ull);
    Seconds t = cfg.start;
    Seconds end = cfg.start + cfg.duration;
    while (t < end) {
      double per_min = cfg.arrival.rate_at(node, t);
      if (per_min <= 0.0) {
        // skip to the next hour boundary, where the rate may change
        Seconds next_hour = (std::floor(t / 3600.0) + 1.0) * 3600.0;
        t = next_hour;
        continue;
      }
      Seconds gap = stream.exponential(per_min / 60.0);
      // arrivals are valid only while the sampled gap stays inside the
      // current hour's rate regime
      Seconds next_hour = (std::floor(t / 3600.0) + 1.0) * 3600.0;
      if (t + gap >= next_hour && next_hour < end) {
        t = next_hour;
        continue;
      }
      t += gap;
      if (t >= end) break;

      VehicleAttributes attrs;
      attrs.plate_id = make_plate("V", plate_counter++);
      attrs.color = draw_value(cfg.palette, stream);
      attrs.make_model = draw_value(cfg.catalog, stream);
      attrs.identity = attrs.plate_id;

      Trajectory traj;
      traj.plate_id = attrs.plate_id;
      traj.visits = walk(net, node, t, cfg, stream);
      result.attributes[attrs.plate_id] = std::move(attrs);
      result.trajectories.push_back(std::move(traj));
    }
  }
  std::sort(result.trajectories.begin(), result.trajectories.end(),
            [](const Trajectory& a, const Trajectory& b) { return a.plate_id < b.plate_id; });
  return result;
}

ResolvedVoi plant_voi(GenerateResult& world, const RoadNetwork& net, const ScenarioConfig& cfg,
                      int voi_index) {
  require_valid(net, cfg);
  if (voi_index < 0 || static_cast<std::size_t>(voi_index) >= cfg.vois.size())
    throw InputError("voi index out of range");
  const VoiSpec& spec = cfg.vois[static_cast<std::size_t>(voi_index)];
  Rng rng = Rng(cfg.seed).fork(0x564f49ull + static_cast<std::uint64_t>(voi_index) * 0x51d7ull);

  ResolvedVoi voi;
  voi.index = voi_index;
  voi.origin = spec.origin;

  if (spec.synthesize) {
    VehicleAttributes attrs;
    attrs.plate_id = make_plate("VOI", static_cast<std::size_t>(voi_index));
    attrs.color = spec.color.empty() ? draw_value(cfg.palette, rng) : spec.color;
    attrs.make_model = spec.make_model.empty() ? draw_value(cfg.catalog, rng) : spec.make_model;
    attrs.identity = attrs.plate_id;

    Trajectory traj;
    traj.plate_id = attrs.plate_id;
    traj.visits = spec.path.empty() ? walk(net, spec.origin, spec.report_time, cfg, rng)
                                    : walk_path(net, spec.path, spec.report_time, rng);
    voi.plate = attrs.plate_id;
    voi.attrs = attrs;
    voi.report_time = spec.report_time;
    voi.trail = traj;

    world.attributes[attrs.plate_id] = std::move(attrs);
    world.trajectories.push_back(std::move(traj));
    std::sort(world.trajectories.begin(), world.trajectories.end(),
              [](const Trajectory& a, const Trajectory& b) { return a.plate_id < b.plate_id; });
    return voi;
  }

  // candidates: (plate, index of the qualifying origin visit)
  std::vector<std::pair<std::string, std::size_t>> candidates;
  for (const Trajectory& traj : world.trajectories) {
    for (std::size_t i = 0; i < traj.visits.size(); ++i) {
      const Visit& v = traj.visits[i];
      if (v.intersection == spec.origin && v.enter >= spec.report_time) {
        candidates.emplace_back(traj.plate_id, i);
        break;
      }
    }
  }
  if (candidates.empty())
    throw InputError("no vehicle passes intersection " + std::to_string(spec.origin) +
                     " after t=" + format_seconds(spec.report_time, 3) +
                     " and synthesis is disabled for this query");
  const auto& [plate, visit_index] = candidates[rng.below(candidates.size())];
  const Trajectory* chosen = nullptr;
  for (const Trajectory& traj : world.trajectories)
    if (traj.plate_id == plate) chosen = &traj;

  voi.plate = plate;
  voi.attrs = world.attributes.at(plate);
  // the query clock starts when the vehicle is actually at the origin
  voi.report_time = chosen->visits[visit_index].enter;
  voi.trail.plate_id = plate;
  voi.trail.visits.assign(chosen->visits.begin() + static_cast<long>(visit_index),
                          chosen->visits.end());
  return voi;
}

std::vector<ResolvedVoi> resolve_vois(GenerateResult& world, const RoadNetwork& net,
                                      const ScenarioConfig& cfg) {
  std::size_t count = cfg.voi_count ? static_cast<std::size_t>(*cfg.voi_count) : cfg.vois.size();
  std::vector<ResolvedVoi> out;
  for (std::size_t i = 0; i < count; ++i)
    out.push_back(plant_voi(world, net, cfg, static_cast<int>(i)));
  return out;
}

}  // namespace edgetrack
