#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "edgetrack/errors.hpp"
#include "edgetrack/experiment.hpp"
#include "edgetrack/io.hpp"
#include "edgetrack/road_network.hpp"
#include "edgetrack/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitInfeasible = 2;

edgetrack::SweepParam parse_sweep_param(const std::string& spec) {
  auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 >= spec.size())
    throw edgetrack::InputError("bad --param '" + spec + "', expected key=v1,v2,...");
  edgetrack::SweepParam param;
  param.key = spec.substr(0, eq);
  std::string values = spec.substr(eq + 1);
  std::size_t start = 0;
  while (start <= values.size()) {
    std::size_t comma = values.find(',', start);
    std::string v = values.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!v.empty()) param.values.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (param.values.empty())
    throw edgetrack::InputError("bad --param '" + spec + "': no values");
  return param;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Road-network vehicle tracking simulator and trace analyzer"};
  app.require_subcommand(1);

  // --- ingest ---
  edgetrack::IngestOptions ingest;
  CLI::App* cmd_ingest = app.add_subcommand("ingest", "Parse GPS records into trajectories and stats");
  cmd_ingest->add_option("--gps", ingest.gps_path, "GPS csv file")->required();
  cmd_ingest->add_option("--network", ingest.network_path, "network file")->required();
  cmd_ingest->add_option("--geo", ingest.geo_path, "intersection coordinate table")->required();
  cmd_ingest->add_option("--out", ingest.out_dir, "output directory")->required();
  cmd_ingest->add_option("--day-epoch", ingest.day_epoch, "epoch seconds of local midnight");
  cmd_ingest->add_option("--radius-m", ingest.radius_m, "snap radius in meters");
  cmd_ingest->add_option("--gap-s", ingest.gap_threshold, "visit merge gap threshold");
  cmd_ingest->add_option("--bucket-s", ingest.histogram_bucket, "histogram bucket");

  // --- stats ---
  std::string stats_traj, stats_net, stats_out;
  double stats_bucket = 60.0;
  CLI::App* cmd_stats = app.add_subcommand("stats", "Derive travel-time stats from a trajectory file");
  cmd_stats->add_option("--trajectories", stats_traj, "trajectory file")->required();
  cmd_stats->add_option("--network", stats_net, "network file")->required();
  cmd_stats->add_option("--out", stats_out, "output directory")->required();
  cmd_stats->add_option("--bucket-s", stats_bucket, "histogram bucket");

  // --- track ---
  std::string track_net, track_scenario, track_out;
  int track_reps = 1;
  std::int64_t track_seed = -1;
  int track_vois = -1;
  bool track_emit_traj = false;
  CLI::App* cmd_track = app.add_subcommand("track", "Run tracking experiments for a scenario");
  cmd_track->add_option("--network", track_net, "network file")->required();
  cmd_track->add_option("--scenario", track_scenario, "scenario config (json)")->required();
  cmd_track->add_option("--out", track_out, "output directory")->required();
  cmd_track->add_option("--reps", track_reps, "repetitions (seed, seed+1, ...)");
  cmd_track->add_option("--seed", track_seed, "override the scenario seed");
  cmd_track->add_option("--voi-count", track_vois, "track only the first N queries");
  cmd_track->add_flag("--emit-trajectories", track_emit_traj, "write generated trajectories per rep");

  // --- sweep ---
  std::string sweep_net, sweep_scenario, sweep_out;
  int sweep_reps = 1;
  std::int64_t sweep_seed = -1;
  int sweep_jobs = 0;
  std::vector<std::string> sweep_params;
  CLI::App* cmd_sweep = app.add_subcommand("sweep", "Run a parameter grid of tracking experiments");
  cmd_sweep->add_option("--network", sweep_net, "network file")->required();
  cmd_sweep->add_option("--scenario", sweep_scenario, "scenario config (json)")->required();
  cmd_sweep->add_option("--out", sweep_out, "output directory")->required();
  cmd_sweep->add_option("--param", sweep_params, "grid dimension key=v1,v2,... (repeatable)")
      ->required();
  cmd_sweep->add_option("--reps", sweep_reps, "repetitions per cell");
  cmd_sweep->add_option("--seed", sweep_seed, "override the scenario seed");
  cmd_sweep->add_option("--jobs", sweep_jobs, "max concurrent cells (default: hardware)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_ingest->parsed()) {
      edgetrack::IngestSummary s = edgetrack::run_ingest(ingest);
      std::cout << "ingested " << s.records << " records (" << s.rejects << " rejected) into "
                << s.vehicles << " vehicles, " << s.visits << " visits\n";
      return kExitOk;
    }
    if (cmd_stats->parsed()) {
      edgetrack::IngestSummary s = edgetrack::run_stats(stats_traj, stats_net, stats_out, stats_bucket);
      std::cout << "derived stats from " << s.vehicles << " vehicles, " << s.visits << " visits\n";
      return kExitOk;
    }
    if (cmd_track->parsed()) {
      edgetrack::RoadNetwork net = edgetrack::RoadNetwork::load(track_net);
      edgetrack::ScenarioConfig cfg = edgetrack::ScenarioConfig::load(track_scenario);
      if (track_seed >= 0) cfg.seed = static_cast<std::uint64_t>(track_seed);
      if (track_vois >= 0) cfg.voi_count = track_vois;
      edgetrack::ExperimentReport report =
          edgetrack::run_experiment(net, cfg, track_reps, &track_out, track_emit_traj);
      std::cout << "tracked " << report.runs.size() << " queries over " << report.repetitions
                << " repetition(s); config " << report.config_hash << "\n"
                << "report: " << track_out << "/report.csv\n";
      return kExitOk;
    }
    if (cmd_sweep->parsed()) {
      edgetrack::RoadNetwork net = edgetrack::RoadNetwork::load(sweep_net);
      edgetrack::ScenarioConfig cfg = edgetrack::ScenarioConfig::load(sweep_scenario);
      if (sweep_seed >= 0) cfg.seed = static_cast<std::uint64_t>(sweep_seed);
      std::vector<edgetrack::SweepParam> grid;
      for (const std::string& spec : sweep_params) grid.push_back(parse_sweep_param(spec));
      edgetrack::SweepResult result =
          edgetrack::run_sweep(net, cfg, sweep_reps, grid, sweep_out, sweep_jobs);
      std::size_t failed = 0;
      for (const auto& cell : result.cells)
        if (cell.status != "ok") ++failed;
      std::cout << "sweep finished: " << result.cells.size() << " cells, " << failed
                << " failed\nconsolidated: " << sweep_out << "/sweep.csv\n";
      return kExitOk;
    }
  } catch (const edgetrack::InfeasibleError& e) {
    std::cerr << "infeasible scenario: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const edgetrack::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitOk;
}
