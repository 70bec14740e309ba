#pragma once

#include <map>
#include <string>
#include <vector>

#include "edgetrack/gps.hpp"
#include "edgetrack/road_network.hpp"
#include "edgetrack/types.hpp"

namespace edgetrack {

/// One stay at an intersection: the vehicle is inside the monitored area of
/// `intersection` during [enter, leave].
struct Visit {
  IntersectionId intersection = kNoIntersection;
  Seconds enter = 0.0;
  Seconds leave = 0.0;

  friend bool operator==(const Visit&, const Visit&) = default;
};

/// Per-vehicle sequence of intersection stays, ordered by enter time.
struct Trajectory {
  std::string plate_id;
  std::vector<Visit> visits;

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

/// Consecutive visits that are not connected by a road segment (when a
/// network is available) are reported here, one string per violation.
std::vector<std::string> connectivity_violations(const Trajectory& traj, const RoadNetwork& net);

/// Intersection coordinates used for map matching.
struct GeoPoint {
  double longitude = 0.0;
  double latitude = 0.0;
};
using GeoTable = std::map<IntersectionId, GeoPoint>;

GeoTable parse_geo_table(const std::string& text);
GeoTable load_geo_table(const std::string& path);

/// Great-circle distance in meters.
double haversine_m(const GeoPoint& a, const GeoPoint& b);

/// GPS point snapped to an intersection.
struct SnappedPoint {
  IntersectionId intersection = kNoIntersection;
  Seconds time = 0.0;

  friend bool operator==(const SnappedPoint&, const SnappedPoint&) = default;
};

/// Nearest-intersection matching within radius_m; equidistant candidates go
/// to the lower id; points farther than the radius from everything are
/// dropped. Output grouped per vehicle, time-sorted. The geo table must
/// cover every intersection of the network.
std::map<std::string, std::vector<SnappedPoint>> map_match(const std::vector<GpsRecord>& records,
                                                           const RoadNetwork& net,
                                                           const GeoTable& geo, double radius_m);

/// Builds visit sequences: consecutive points at one intersection within
/// gap_threshold merge into a single visit; an intersection change or a gap
/// larger than the threshold starts a new visit. Result sorted by plate id.
std::vector<Trajectory> extract_trajectories(
    const std::map<std::string, std::vector<SnappedPoint>>& snapped, Seconds gap_threshold);

/// Trajectory file format: "plate intersection enter_s leave_s" per visit.
std::string trajectories_to_text(const std::vector<Trajectory>& trajectories);
std::vector<Trajectory> parse_trajectories(const std::string& text);
std::vector<Trajectory> load_trajectories(const std::string& path);
void save_trajectories(const std::vector<Trajectory>& trajectories, const std::string& path);

}  // namespace edgetrack
