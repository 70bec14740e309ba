#include "edgetrack/reid.hpp"

#include <stdexcept>

namespace edgetrack {

const char* to_string(Granularity g) {
  switch (g) {
    case Granularity::Color: return "color";
    case Granularity::ModelMake: return "model_make";
    case Granularity::Full: return "full";
  }
  return "?";
}

const char* to_string(MatchOutcome o) {
  switch (o) {
    case MatchOutcome::Reject: return "reject";
    case MatchOutcome::Suspect: return "suspect";
    case MatchOutcome::Confirm: return "confirm";
  }
  return "?";
}

std::vector<ReidModuleSpec> default_module_specs() {
  return {
      {Granularity::Color, 0.0005, std::nullopt, 0.003},
      {Granularity::ModelMake, 0.0406, 341.5e6, 0.022},
      {Granularity::Full, 0.3101, 19602.3e6, 0.273},
  };
}

std::vector<FeatureExtractorSpec> deep_feature_extractor_specs() {
  return {
      {"global", 0.0411, 341.5e6, 0.024},
      {"region", 0.0967, 7868.4e6, 0.098},
      {"key_point", 0.1723, 11392.0e6, 0.150},
  };
}

CascadeProfile CascadeProfile::from_module_times(Seconds color, Seconds model_make, Seconds full) {
  CascadeProfile p;
  p.e1 = color;
  p.e2 = color + model_make;
  p.e3 = p.e2 + full;
  return p;
}

Seconds CascadeProfile::cumulative_cost(Granularity g) const {
  switch (g) {
    case Granularity::Color: return e1;
    case Granularity::ModelMake: return e2;
    case Granularity::Full: return e3;
  }
  throw std::invalid_argument("bad granularity");
}

CascadeProfile default_profile() {
  return CascadeProfile::from_module_times(0.0005, 0.0406, 0.3101);
}

MatchOutcome match(Granularity g, const VehicleAttributes& candidate, const VehicleAttributes& voi) {
  switch (g) {
    case Granularity::Color:
      return candidate.color == voi.color ? MatchOutcome::Suspect : MatchOutcome::Reject;
    case Granularity::ModelMake:
      return (candidate.color == voi.color && candidate.make_model == voi.make_model)
                 ? MatchOutcome::Suspect
                 : MatchOutcome::Reject;
    case Granularity::Full:
      return candidate.identity == voi.identity ? MatchOutcome::Confirm : MatchOutcome::Reject;
  }
  return MatchOutcome::Reject;
}

}  // namespace edgetrack
