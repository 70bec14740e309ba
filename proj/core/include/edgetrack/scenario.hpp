#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "edgetrack/reid.hpp"
#include "edgetrack/road_network.hpp"
#include "edgetrack/types.hpp"

namespace edgetrack {

/// Finite value set with draw weights (uniform when weights omitted).
struct AttributeDistribution {
  std::vector<std::string> values;
  std::vector<double> weights;
};

/// One tracking query to plant: either select a generated vehicle passing the
/// origin after the report time, or synthesize a vehicle (optionally along a
/// forced path) entering the origin exactly at the report time.
struct VoiSpec {
  IntersectionId origin = kNoIntersection;
  Seconds report_time = 0.0;
  bool synthesize = false;
  std::vector<IntersectionId> path;  // optional forced route; front must be origin
  std::string color;                 // optional; drawn from the palette when empty
  std::string make_model;            // optional; drawn from the catalog when empty
};

/// Hour-of-day arrival-rate profile, vehicles per minute spawned per node.
struct RateProfile {
  std::vector<double> default_per_min = {0.0};       // cycled over hour-of-day
  std::map<IntersectionId, std::vector<double>> overrides;

  double rate_at(IntersectionId node, Seconds t) const;
};

struct ScenarioConfig {
  std::uint64_t seed = 1;
  Seconds start = 0.0;
  Seconds duration = 3600.0;
  Seconds frame_period = 1.0 / 24.0;
  int processors = 20;
  CascadeProfile profile = default_profile();
  AttributeDistribution palette{{"silver", "black", "white", "red", "blue"}, {}};
  AttributeDistribution catalog{{"glb_suv", "c_sedan", "x5_suv", "corolla_sedan"}, {}};
  RateProfile arrival;
  double trip_continue_prob = 0.5;
  int max_hops = 12;
  std::vector<VoiSpec> vois;
  std::optional<int> voi_count;        // track only the first N query specs
  bool case2_literal_dwell = false;    // alternate case-2 start formula
  Seconds histogram_bucket = 60.0;
  Seconds horizon_slack = 1800.0;      // run the tracker this far past duration at most

  static ScenarioConfig from_json_text(const std::string& text);
  static ScenarioConfig load(const std::string& path);

  /// Canonical re-serialization of the effective config (sorted keys, fixed
  /// number formatting); hashing this makes reruns comparable.
  std::string canonical_json() const;

  std::vector<std::string> validate(const RoadNetwork& net) const;
};

/// 64-bit FNV-1a, hex-encoded; used for config hashes.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace edgetrack
