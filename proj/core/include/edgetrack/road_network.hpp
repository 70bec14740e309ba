#pragma once

#include <map>
#include <string>
#include <vector>

#include "edgetrack/types.hpp"

namespace edgetrack {

/// One-way road segment between two intersections, carrying the observed
/// travel-time range for the segment.
struct RoadSegment {
  IntersectionId from = kNoIntersection;
  IntersectionId to = kNoIntersection;
  TravelInterval travel;

  friend bool operator==(const RoadSegment&, const RoadSegment&) = default;
};

/// Directed intersection/segment graph. Each intersection carries the dwell
/// (time spent crossing it) range; each segment the travel-time range.
/// Two-way streets are two segments. Immutable once built; shared read-only
/// across concurrent scenario runs.
class RoadNetwork {
 public:
  void add_intersection(IntersectionId id, TravelInterval dwell);
  void add_segment(IntersectionId from, IntersectionId to, TravelInterval travel);

  bool has_intersection(IntersectionId id) const;
  const TravelInterval& dwell(IntersectionId id) const;

  /// Travel interval of segment from -> to; throws if absent.
  const TravelInterval& travel(IntersectionId from, IntersectionId to) const;
  const TravelInterval* find_travel(IntersectionId from, IntersectionId to) const;

  /// Distinct successor ids of x, ascending. Deterministic across runs.
  std::vector<IntersectionId> neighbors(IntersectionId x) const;

  /// Smallest lower-bound travel time over x's outgoing segments: the time
  /// budget for identifying a vehicle at x before it can reach a neighbor.
  Seconds relative_deadline(IntersectionId x) const;

  /// Structural diagnostics: dangling endpoints, non-positive or inverted
  /// intervals, duplicate segments. Empty means all invariants hold.
  std::vector<std::string> validate() const;

  const std::map<IntersectionId, TravelInterval>& intersections() const { return intersections_; }
  const std::vector<RoadSegment>& segments() const { return segments_; }
  std::size_t intersection_count() const { return intersections_.size(); }

  /// Text format with [intersections] and [segments] sections; see the
  /// file-format section of the README.
  static RoadNetwork parse(const std::string& text);
  static RoadNetwork load(const std::string& path);
  std::string to_text() const;
  void save(const std::string& path) const;

 private:
  std::map<IntersectionId, TravelInterval> intersections_;
  std::vector<RoadSegment> segments_;
  // out-edge indices into segments_, per source intersection
  std::map<IntersectionId, std::vector<std::size_t>> out_;
};

/// rows x cols grid with the same dwell/travel intervals everywhere and
/// two-way segments between lattice neighbors. Ids are 1-based, row-major.
RoadNetwork make_grid(int rows, int cols, TravelInterval dwell, TravelInterval travel);

}  // namespace edgetrack
