#pragma once

#include <optional>
#include <string>
#include <vector>

#include "edgetrack/types.hpp"

namespace edgetrack {

/// Matching granularity of the layered re-identification cascade, coarsest
/// first. Selecting a layer implies executing all coarser layers too.
enum class Granularity { Color = 1, ModelMake = 2, Full = 3 };

const char* to_string(Granularity g);

enum class MatchOutcome { Reject, Suspect, Confirm };

const char* to_string(MatchOutcome o);

/// What the simulator knows about a vehicle's appearance and identity.
struct VehicleAttributes {
  std::string plate_id;
  std::string color;
  std::string make_model;
  std::string identity;  // unique per vehicle; equality = same physical vehicle

  friend bool operator==(const VehicleAttributes&, const VehicleAttributes&) = default;
};

/// Per-layer cost metadata (inference time on one bounding box, plus optional
/// flops / cpu-share figures carried for reporting only).
struct ReidModuleSpec {
  Granularity granularity = Granularity::Color;
  Seconds inference_time = 0.0;
  std::optional<double> flops;      // floating point ops per box
  std::optional<double> cpu_usage;  // fraction of one core
};

/// Measured module costs on the reference edge CPU.
std::vector<ReidModuleSpec> default_module_specs();

/// Per-feature-extractor breakdown of the full re-identification layer
/// (global / region / key-point networks). Reporting metadata only; the
/// scheduler consumes module-level times.
struct FeatureExtractorSpec {
  std::string name;
  Seconds inference_time = 0.0;
  double flops = 0.0;
  double cpu_usage = 0.0;
};

std::vector<FeatureExtractorSpec> deep_feature_extractor_specs();

/// Cumulative execution cost of running the cascade up to each layer:
/// e1 = color, e2 = e1 + model/make, e3 = e2 + full re-identification.
struct CascadeProfile {
  Seconds e1 = 0.0;
  Seconds e2 = 0.0;
  Seconds e3 = 0.0;

  static CascadeProfile from_module_times(Seconds color, Seconds model_make, Seconds full);

  Seconds cumulative_cost(Granularity g) const;
  bool valid() const { return e1 > 0.0 && e1 < e2 && e2 < e3; }

  friend bool operator==(const CascadeProfile&, const CascadeProfile&) = default;
};

/// Reference-CPU profile: 0.5 ms color, 40.6 ms model/make, 310.1 ms full.
CascadeProfile default_profile();

/// Deterministic attribute matching. A reject at any layer is authoritative;
/// only the full layer can confirm identity.
MatchOutcome match(Granularity g, const VehicleAttributes& candidate, const VehicleAttributes& voi);

}  // namespace edgetrack
