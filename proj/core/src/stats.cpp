#include "edgetrack/stats.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace edgetrack {

TravelStatsResult derive_travel_time_stats(const std::vector<Trajectory>& trajectories,
                                           const RoadNetwork& net) {
  std::map<IntersectionId, TravelInterval> dwell_obs;
  std::map<std::pair<IntersectionId, IntersectionId>, TravelInterval> seg_obs;
  TravelStatsResult result;

  auto widen = [](TravelInterval& iv, Seconds value, bool first) {
    if (first) {
      iv = TravelInterval{value, value};
    } else {
      iv.lo = std::min(iv.lo, value);
      iv.hi = std::max(iv.hi, value);
    }
  };

  for (const Trajectory& traj : trajectories) {
    for (std::size_t i = 0; i < traj.visits.size(); ++i) {
      const Visit& v = traj.visits[i];
      Seconds stay = v.leave - v.enter;
      bool first = dwell_obs.find(v.intersection) == dwell_obs.end();
      widen(dwell_obs[v.intersection], stay, first);
      ++result.dwell_observations;
      if (i + 1 < traj.visits.size()) {
        const Visit& next = traj.visits[i + 1];
        Seconds travel = next.enter - v.leave;
        if (travel < 0.0) {
          result.dropped.push_back(traj.plate_id + ": negative travel time " +
                                   std::to_string(v.intersection) + " -> " +
                                   std::to_string(next.intersection));
          continue;
        }
        auto key = std::make_pair(v.intersection, next.intersection);
        bool seg_first = seg_obs.find(key) == seg_obs.end();
        widen(seg_obs[key], travel, seg_first);
        ++result.segment_observations;
      }
    }
  }

  RoadNetwork updated;
  for (const auto& [id, dwell] : net.intersections()) {
    auto it = dwell_obs.find(id);
    updated.add_intersection(id, it != dwell_obs.end() ? it->second : dwell);
  }
  for (const RoadSegment& seg : net.segments()) {
    auto it = seg_obs.find({seg.from, seg.to});
    updated.add_segment(seg.from, seg.to, it != seg_obs.end() ? it->second : seg.travel);
  }
  result.network = std::move(updated);
  return result;
}

TrafficTimeline::TrafficTimeline(const std::vector<Trajectory>& trajectories, Seconds bucket,
                                 Seconds origin)
    : bucket_(bucket), origin_(origin) {
  Seconds last = origin;
  for (const Trajectory& traj : trajectories) {
    for (const Visit& v : traj.visits) {
      visits_[v.intersection].push_back(NodeVisit{traj.plate_id, v.enter, v.leave});
      Seconds& m = max_stay_[v.intersection];
      m = std::max(m, v.leave - v.enter);
      last = std::max(last, v.leave);
    }
  }
  for (auto& [node, list] : visits_) {
    std::stable_sort(list.begin(), list.end(), [](const NodeVisit& a, const NodeVisit& b) {
      if (a.enter != b.enter) return a.enter < b.enter;
      return a.plate < b.plate;
    });
  }
  if (bucket_ > 0.0) {
    buckets_ = static_cast<std::size_t>(std::ceil(std::max(0.0, last - origin_) / bucket_));
    if (buckets_ == 0) buckets_ = 1;
    for (const auto& [node, list] : visits_) {
      std::vector<int>& counts = counts_[node];
      counts.assign(buckets_, 0);
      // a vehicle counts once in every bucket its stay overlaps, but only
      // once per bucket even across multiple stays
      std::map<std::string, long> last_counted;
      for (const NodeVisit& v : list) {
        auto first = static_cast<long>(std::floor((v.enter - origin_) / bucket_));
        auto final = static_cast<long>(std::floor((v.leave - origin_) / bucket_));
        first = std::max(first, 0L);
        final = std::min(final, static_cast<long>(buckets_) - 1);
        auto seen = last_counted.find(v.plate);
        if (seen != last_counted.end()) first = std::max(first, seen->second + 1);
        for (long b = first; b <= final; ++b) ++counts[static_cast<std::size_t>(b)];
        if (final >= first) last_counted[v.plate] = final;
      }
    }
  }
}

std::vector<std::string> TrafficTimeline::present(IntersectionId node, Seconds t) const {
  std::vector<std::string> out;
  auto it = visits_.find(node);
  if (it == visits_.end()) return out;
  const std::vector<NodeVisit>& list = it->second;
  Seconds max_stay = 0.0;
  if (auto ms = max_stay_.find(node); ms != max_stay_.end()) max_stay = ms->second;
  // visits are sorted by enter; anything entering before t - max_stay is over
  auto lo = std::lower_bound(list.begin(), list.end(), t - max_stay,
                             [](const NodeVisit& v, Seconds x) { return v.enter < x; });
  for (auto v = lo; v != list.end() && v->enter <= t; ++v) {
    if (v->leave >= t) out.push_back(v->plate);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

int TrafficTimeline::count_at(IntersectionId node, Seconds t) const {
  return static_cast<int>(present(node, t).size());
}

int TrafficTimeline::bucket_count_at(IntersectionId node, std::size_t b) const {
  auto it = counts_.find(node);
  if (it == counts_.end() || b >= it->second.size()) return 0;
  return it->second[b];
}

double TrafficTimeline::mean_per_bucket(IntersectionId node) const {
  auto it = counts_.find(node);
  if (it == counts_.end() || it->second.empty() || buckets_ == 0) return 0.0;
  double sum = 0.0;
  for (int c : it->second) sum += c;
  return sum / static_cast<double>(buckets_);
}

double TrafficHistogram::fraction_below(double limit) const {
  if (mean_per_bucket.empty()) return 1.0;
  std::size_t n = 0;
  for (const auto& [node, mean] : mean_per_bucket)
    if (mean < limit) ++n;
  return static_cast<double>(n) / static_cast<double>(mean_per_bucket.size());
}

double TrafficHistogram::fraction_near(double target, double tolerance) const {
  if (mean_per_bucket.empty()) return 0.0;
  std::size_t n = 0;
  for (const auto& [node, mean] : mean_per_bucket)
    if (std::abs(mean - target) <= tolerance) ++n;
  return static_cast<double>(n) / static_cast<double>(mean_per_bucket.size());
}

std::pair<TrafficTimeline, TrafficHistogram> derive_traffic_histogram(
    const std::vector<Trajectory>& trajectories, const RoadNetwork& net, Seconds bucket) {
  Seconds origin = 0.0;
  bool any = false;
  for (const Trajectory& t : trajectories)
    for (const Visit& v : t.visits)
      if (!any || v.enter < origin) {
        origin = v.enter;
        any = true;
      }
  if (any && bucket > 0.0) origin = std::floor(origin / bucket) * bucket;

  TrafficTimeline timeline(trajectories, bucket, origin);
  TrafficHistogram histogram;
  histogram.bucket = bucket;
  for (const auto& [id, dwell] : net.intersections())
    histogram.mean_per_bucket[id] = timeline.mean_per_bucket(id);
  return {std::move(timeline), std::move(histogram)};
}

std::string histogram_to_csv(const TrafficHistogram& histogram) {
  std::ostringstream out;
  out << "intersection,mean_vehicles_per_bucket,bucket_s\n";
  for (const auto& [node, mean] : histogram.mean_per_bucket)
    out << node << ',' << format_seconds(mean, 4) << ',' << format_seconds(histogram.bucket, 3) << '\n';
  return out.str();
}

}  // namespace edgetrack
