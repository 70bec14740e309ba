#pragma once

#include <map>
#include <string>
#include <vector>

#include "edgetrack/road_network.hpp"
#include "edgetrack/trajectory.hpp"
#include "edgetrack/types.hpp"

namespace edgetrack {

struct TravelStatsResult {
  RoadNetwork network;                      // copy of the input with updated intervals
  std::vector<std::string> dropped;         // negative observations (clock skew), logged
  std::size_t dwell_observations = 0;
  std::size_t segment_observations = 0;
};

/// Replaces dwell and travel intervals with the [min, max] of what the
/// trajectories actually realized. Locations with no observations keep their
/// prior values; negative segment times are dropped and logged.
TravelStatsResult derive_travel_time_stats(const std::vector<Trajectory>& trajectories,
                                           const RoadNetwork& net);

/// Who is where, when: per-intersection visit index plus per-bucket distinct
/// vehicle counts. Drives both detection counts in the tracking loop and the
/// traffic histogram used for calibration.
class TrafficTimeline {
 public:
  struct NodeVisit {
    std::string plate;
    Seconds enter = 0.0;
    Seconds leave = 0.0;
  };

  TrafficTimeline() = default;
  TrafficTimeline(const std::vector<Trajectory>& trajectories, Seconds bucket, Seconds origin);

  /// Plates present at `node` at instant t (enter <= t <= leave), sorted.
  std::vector<std::string> present(IntersectionId node, Seconds t) const;
  int count_at(IntersectionId node, Seconds t) const;

  Seconds bucket() const { return bucket_; }
  Seconds origin() const { return origin_; }
  std::size_t bucket_count() const { return buckets_; }

  /// Distinct vehicles whose stay overlaps bucket b at the node.
  int bucket_count_at(IntersectionId node, std::size_t b) const;
  /// Mean per-bucket distinct-vehicle count over the whole timeline span.
  double mean_per_bucket(IntersectionId node) const;

  const std::map<IntersectionId, std::vector<NodeVisit>>& visits() const { return visits_; }
  const std::map<IntersectionId, std::vector<int>>& bucket_counts() const { return counts_; }

 private:
  Seconds bucket_ = 60.0;
  Seconds origin_ = 0.0;
  std::size_t buckets_ = 0;
  std::map<IntersectionId, std::vector<NodeVisit>> visits_;  // sorted by enter
  std::map<IntersectionId, Seconds> max_stay_;
  std::map<IntersectionId, std::vector<int>> counts_;
};

/// Cross-intersection load distribution for calibration checks.
struct TrafficHistogram {
  Seconds bucket = 60.0;
  std::map<IntersectionId, double> mean_per_bucket;  // distinct vehicles per bucket

  /// Fraction of intersections with mean count strictly below `limit`.
  double fraction_below(double limit) const;
  /// Fraction with mean count within +-tolerance of `target`.
  double fraction_near(double target, double tolerance) const;
};

/// Builds the timeline and the distribution of per-bucket counts across all
/// intersections of the network (zero for unvisited ones).
std::pair<TrafficTimeline, TrafficHistogram> derive_traffic_histogram(
    const std::vector<Trajectory>& trajectories, const RoadNetwork& net, Seconds bucket);

std::string histogram_to_csv(const TrafficHistogram& histogram);

}  // namespace edgetrack
