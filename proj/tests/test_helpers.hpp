#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "edgetrack/reid.hpp"
#include "edgetrack/road_network.hpp"
#include "edgetrack/trajectory.hpp"

namespace edgetrack::test {

inline TravelInterval default_dwell() { return {3.0, 42.0}; }
inline TravelInterval default_travel() { return {30.0, 50.0}; }

/// 4x4 two-way grid with the reference dwell/travel ranges.
inline RoadNetwork grid4() { return make_grid(4, 4, default_dwell(), default_travel()); }
inline RoadNetwork grid5() { return make_grid(5, 5, default_dwell(), default_travel()); }

inline VehicleAttributes attrs(const std::string& plate, const std::string& color,
                               const std::string& model) {
  return VehicleAttributes{plate, color, model, plate};
}

/// Trajectory along `path`, entering node i at times[i] and staying `stay`.
inline Trajectory path_trajectory(const std::string& plate, const std::vector<IntersectionId>& path,
                                  Seconds first_enter, Seconds stay, Seconds travel) {
  Trajectory t;
  t.plate_id = plate;
  Seconds enter = first_enter;
  for (IntersectionId node : path) {
    t.visits.push_back(Visit{node, enter, enter + stay});
    enter += stay + travel;
  }
  return t;
}

inline std::filesystem::path fresh_dir(const std::string& name) {
  std::filesystem::path dir = std::filesystem::temp_directory_path() / ("edgetrack_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace edgetrack::test
