#include "edgetrack/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "edgetrack/errors.hpp"

namespace edgetrack {

std::vector<std::string> connectivity_violations(const Trajectory& traj, const RoadNetwork& net) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i + 1 < traj.visits.size(); ++i) {
    IntersectionId a = traj.visits[i].intersection;
    IntersectionId b = traj.visits[i + 1].intersection;
    if (!net.find_travel(a, b))
      out.push_back(traj.plate_id + ": no segment " + std::to_string(a) + " -> " + std::to_string(b));
  }
  return out;
}

GeoTable parse_geo_table(const std::string& text) {
  GeoTable table;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto b = line.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) continue;
    if (line[b] == '#' || line[b] == '[') continue;
    std::istringstream is(line);
    IntersectionId id;
    double lon, lat;
    if (!(is >> id >> lon >> lat))
      throw InputError("geo table line " + std::to_string(lineno) + ": expected 'id longitude latitude'");
    table[id] = GeoPoint{lon, lat};
  }
  return table;
}

GeoTable load_geo_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open geo table: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_geo_table(buf.str());
}

double haversine_m(const GeoPoint& a, const GeoPoint& b) {
  constexpr double kEarthRadiusM = 6371000.0;
  constexpr double kDeg = 3.14159265358979323846 / 180.0;
  double dlat = (b.latitude - a.latitude) * kDeg;
  double dlon = (b.longitude - a.longitude) * kDeg;
  double s1 = std::sin(dlat / 2), s2 = std::sin(dlon / 2);
  double h = s1 * s1 + std::cos(a.latitude * kDeg) * std::cos(b.latitude * kDeg) * s2 * s2;
  return 2.0 * kEarthRadiusM * std::asin(std::min(1.0, std::sqrt(h)));
}

std::map<std::string, std::vector<SnappedPoint>> map_match(const std::vector<GpsRecord>& records,
                                                           const RoadNetwork& net,
                                                           const GeoTable& geo, double radius_m) {
  for (const auto& [id, dwell] : net.intersections()) {
    if (!geo.count(id))
      throw InputError("geo table has no coordinates for intersection " + std::to_string(id));
  }
  std::map<std::string, std::vector<SnappedPoint>> out;
  for (const GpsRecord& rec : records) {
    GeoPoint p{rec.longitude, rec.latitude};
    IntersectionId best = kNoIntersection;
    double best_d = radius_m;
    for (const auto& [id, dwell] : net.intersections()) {
      double d = haversine_m(p, geo.at(id));
      // strictly closer wins; ties already resolved by ascending id order
      if (best == kNoIntersection ? d <= best_d : d < best_d) {
        best = id;
        best_d = d;
      }
    }
    if (best != kNoIntersection) out[rec.plate_id].push_back(SnappedPoint{best, rec.time});
  }
  for (auto& [plate, points] : out) {
    std::stable_sort(points.begin(), points.end(),
                     [](const SnappedPoint& a, const SnappedPoint& b) { return a.time < b.time; });
  }
  return out;
}

std::vector<Trajectory> extract_trajectories(
    const std::map<std::string, std::vector<SnappedPoint>>& snapped, Seconds gap_threshold) {
  std::vector<Trajectory> out;
  for (const auto& [plate, points] : snapped) {
    if (points.empty()) continue;
    Trajectory traj;
    traj.plate_id = plate;
    Visit cur{points.front().intersection, points.front().time, points.front().time};
    for (std::size_t i = 1; i < points.size(); ++i) {
      const SnappedPoint& p = points[i];
      if (p.intersection == cur.intersection && p.time - cur.leave <= gap_threshold) {
        cur.leave = p.time;
      } else {
        traj.visits.push_back(cur);
        cur = Visit{p.intersection, p.time, p.time};
      }
    }
    traj.visits.push_back(cur);
    out.push_back(std::move(traj));
  }
  return out;
}

std::string trajectories_to_text(const std::vector<Trajectory>& trajectories) {
  std::ostringstream out;
  out << "# plate intersection enter_s leave_s\n";
  for (const Trajectory& t : trajectories)
    for (const Visit& v : t.visits)
      out << t.plate_id << ' ' << v.intersection << ' ' << format_seconds(v.enter, 3) << ' '
          << format_seconds(v.leave, 3) << '\n';
  return out.str();
}

std::vector<Trajectory> parse_trajectories(const std::string& text) {
  std::map<std::string, Trajectory> by_plate;
  std::vector<std::string> order;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto b = line.find_first_not_of(" \t\r\n");
    if (b == std::string::npos || line[b] == '#') continue;
    std::istringstream is(line);
    std::string plate;
    Visit v;
    if (!(is >> plate >> v.intersection >> v.enter >> v.leave))
      throw InputError("trajectory file line " + std::to_string(lineno) +
                       ": expected 'plate intersection enter_s leave_s'");
    if (v.leave < v.enter)
      throw InputError("trajectory file line " + std::to_string(lineno) + ": leave before enter");
    auto [it, inserted] = by_plate.try_emplace(plate);
    if (inserted) {
      it->second.plate_id = plate;
      order.push_back(plate);
    }
    it->second.visits.push_back(v);
  }
  std::vector<Trajectory> out;
  out.reserve(order.size());
  std::sort(order.begin(), order.end());
  for (const std::string& plate : order) out.push_back(std::move(by_plate[plate]));
  return out;
}

std::vector<Trajectory> load_trajectories(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open trajectory file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_trajectories(buf.str());
}

void save_trajectories(const std::vector<Trajectory>& trajectories, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write trajectory file: " + path);
  out << trajectories_to_text(trajectories);
}

}  // namespace edgetrack
