#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "edgetrack/road_network.hpp"
#include "edgetrack/scenario.hpp"
#include "edgetrack/tracker.hpp"

namespace edgetrack {

/// Hour-of-day aggregate over all repetitions of one experiment.
struct HourlyRow {
  int hour = 0;
  double mean_reid_delay_s = 0.0;
  double max_reid_delay_s = 0.0;
  double mean_involved_nodes = 0.0;
  double total_cost_s = 0.0;  // mean over repetitions of the per-rep total
  long confirmed_visits = 0;
  long visits = 0;
  long queries = 0;
};

/// One (repetition, query) outcome with its event-log reference.
struct RunRef {
  int rep = 0;
  int voi = 0;
  std::uint64_t seed = 0;
  std::string plate;
  IntersectionId origin = kNoIntersection;
  Seconds report_s = 0.0;
  std::string status;
  int involved_nodes = 0;
  int confirmations = 0;
  std::string event_log;  // file name, empty when files were not written
};

struct ExperimentReport {
  std::string config_hash;
  std::uint64_t seed = 0;
  int repetitions = 1;
  std::vector<HourlyRow> hours;  // always 24 rows, hour 0..23
  std::vector<RunRef> runs;
};

/// Runs the scenario `repetitions` times (repetition r uses seed + r),
/// tracking all configured queries per repetition with shared per-node frame
/// processing. When out_dir is non-null, writes report.csv, runs.csv,
/// meta.json and one event log per repetition there (atomically). Throws
/// InfeasibleError with the offending intersection and frame when a node is
/// overloaded beyond color-only matching.
ExperimentReport run_experiment(const RoadNetwork& net, ScenarioConfig cfg, int repetitions,
                                const std::string* out_dir, bool emit_trajectories = false);

std::string report_to_csv(const ExperimentReport& report);
std::string runs_to_csv(const ExperimentReport& report);

struct IngestOptions {
  std::string gps_path;
  std::string network_path;
  std::string geo_path;
  std::string out_dir;
  Seconds day_epoch = 0.0;
  double radius_m = 75.0;
  Seconds gap_threshold = 30.0;
  Seconds histogram_bucket = 60.0;
};

struct IngestSummary {
  std::size_t records = 0;
  std::size_t rejects = 0;
  std::size_t vehicles = 0;
  std::size_t visits = 0;
};

/// GPS -> trajectories, derived travel intervals, traffic histogram, rejects
/// report. Nothing is written until every input parsed (a corrupt header
/// leaves no partial outputs).
IngestSummary run_ingest(const IngestOptions& opt);

/// Trajectory file -> derived travel intervals + traffic histogram.
IngestSummary run_stats(const std::string& trajectories_path, const std::string& network_path,
                        const std::string& out_dir, Seconds histogram_bucket = 60.0);

/// One sweep dimension: a config key and the values to try. Supported keys:
/// processors, frame_period_s, voi_count, seed, color_ms, model_ms, full_ms.
struct SweepParam {
  std::string key;
  std::vector<std::string> values;
};

struct SweepCellResult {
  int cell = 0;
  std::map<std::string, std::string> params;
  std::string status;  // "ok" or the failure text
  ExperimentReport report;
};

struct SweepResult {
  std::vector<SweepCellResult> cells;
};

/// Cartesian grid over the parameters; cells run concurrently, each into its
/// own subdirectory. Per-cell failures are recorded and the sweep continues.
SweepResult run_sweep(const RoadNetwork& net, const ScenarioConfig& base, int repetitions,
                      const std::vector<SweepParam>& grid, const std::string& out_dir,
                      int max_parallel = 0);

std::string sweep_to_csv(const SweepResult& sweep);

}  // namespace edgetrack
