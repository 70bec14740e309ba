#pragma once

#include <map>
#include <string>
#include <vector>

#include "edgetrack/reid.hpp"
#include "edgetrack/rng.hpp"
#include "edgetrack/road_network.hpp"
#include "edgetrack/scenario.hpp"
#include "edgetrack/trajectory.hpp"

namespace edgetrack {

struct GenerateResult {
  std::vector<Trajectory> trajectories;                 // sorted by plate id
  std::map<std::string, VehicleAttributes> attributes;  // plate -> attributes
};

/// Synthesizes the background traffic: per-node Poisson arrivals following the
/// configured hour-of-day rates, random walks over the segment graph, dwell
/// and travel times drawn uniformly from the network's intervals. Fully
/// deterministic for a given seed. Throws InputError on an invalid config.
GenerateResult generate(const RoadNetwork& net, const ScenarioConfig& cfg);

/// A query ready to track: the designated vehicle, its ground-truth route
/// suffix starting at the origin, and the effective report instant (the
/// vehicle's arrival at the origin).
struct ResolvedVoi {
  int index = 0;
  std::string plate;
  VehicleAttributes attrs;
  IntersectionId origin = kNoIntersection;
  Seconds report_time = 0.0;
  Trajectory trail;
};

/// Designates the vehicle for one query: selects a generated vehicle passing
/// the origin at/after the requested report time (seeded choice among
/// candidates), or synthesizes one, appending its trajectory and attributes
/// to `world` so it takes part in detection like any other vehicle.
ResolvedVoi plant_voi(GenerateResult& world, const RoadNetwork& net, const ScenarioConfig& cfg,
                      int voi_index);

/// All queries of the scenario (honoring voi_count), in spec order.
std::vector<ResolvedVoi> resolve_vois(GenerateResult& world, const RoadNetwork& net,
                                      const ScenarioConfig& cfg);

}  // namespace edgetrack
