#include "edgetrack/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>
#include <thread>

#include "edgetrack/errors.hpp"
#include "edgetrack/io.hpp"
#include "edgetrack/stats.hpp"
#include "edgetrack/traffic_gen.hpp"
#include "json.hpp"

namespace edgetrack {

namespace {

void require_valid_network(const RoadNetwork& net) {
  std::vector<std::string> violations = net.validate();
  if (!violations.empty()) {
    std::string msg = "network validation failed:";
    for (const std::string& v : violations) msg += "\n  - " + v;
    throw InputError(msg);
  }
}

struct HourAccumulator {
  double delay_sum = 0.0;
  double delay_max = 0.0;
  long delay_count = 0;
  long visits = 0;
  long involved_sum = 0;
  long queries = 0;
  double cost = 0.0;
};

}  // namespace

ExperimentReport run_experiment(const RoadNetwork& net, ScenarioConfig cfg, int repetitions,
                                const std::string* out_dir, bool emit_trajectories) {
  if (repetitions < 1) throw InputError("repetitions must be positive");
  require_valid_network(net);
  {
    std::vector<std::string> problems = cfg.validate(net);
    if (!problems.empty()) {
      std::string msg = "invalid scenario config:";
      for (const std::string& p : problems) msg += "\n  - " + p;
      throw InputError(msg);
    }
  }

  ExperimentReport report;
  report.config_hash = fnv1a_hex(cfg.canonical_json());
  report.seed = cfg.seed;
  report.repetitions = repetitions;

  if (out_dir) ensure_directory(*out_dir);

  std::vector<HourAccumulator> acc(24);

  for (int rep = 0; rep < repetitions; ++rep) {
    ScenarioConfig rep_cfg = cfg;
    rep_cfg.seed = cfg.seed + static_cast<std::uint64_t>(rep);

    GenerateResult world = generate(net, rep_cfg);
    std::vector<ResolvedVoi> vois = resolve_vois(world, net, rep_cfg);

    std::vector<VoiQuery> queries;
    for (const ResolvedVoi& v : vois)
      queries.push_back(VoiQuery{v.attrs, v.origin, v.report_time});

    TrackerConfig tcfg;
    tcfg.frame_period = rep_cfg.frame_period;
    tcfg.processors = rep_cfg.processors;
    tcfg.profile = rep_cfg.profile;
    tcfg.case2_literal_dwell = rep_cfg.case2_literal_dwell;
    tcfg.horizon = rep_cfg.start + rep_cfg.duration + rep_cfg.horizon_slack;

    RunResult rr = run(net, world.trajectories, world.attributes, queries, tcfg);
    if (rr.infeasible) throw InfeasibleError(rr.diagnostic);

    std::string log_name = "events_r" + std::to_string(rep) + ".log";
    if (out_dir) {
      write_file_atomic(*out_dir + "/" + log_name, rr.log.to_text());
      if (emit_trajectories)
        write_file_atomic(*out_dir + "/trajectories_r" + std::to_string(rep) + ".txt",
                          trajectories_to_text(world.trajectories));
    }

    for (const auto& [hour, cost] : rr.hourly_exec_cost) acc[static_cast<std::size_t>(hour)].cost += cost;

    for (std::size_t qi = 0; qi < rr.vois.size(); ++qi) {
      const VoiRunResult& vr = rr.vois[qi];
      int qh = hour_of_day(vr.query.report_time);
      acc[static_cast<std::size_t>(qh)].involved_sum += static_cast<long>(vr.involved_nodes.size());
      acc[static_cast<std::size_t>(qh)].queries += 1;
      for (const VisitDelay& d : vr.visit_delays) {
        int vh = hour_of_day(d.arrival);
        HourAccumulator& a = acc[static_cast<std::size_t>(vh)];
        a.visits += 1;
        if (d.delay) {
          a.delay_sum += *d.delay;
          a.delay_max = std::max(a.delay_max, *d.delay);
          a.delay_count += 1;
        }
      }
      report.runs.push_back(RunRef{rep, static_cast<int>(qi), rep_cfg.seed, vr.plate,
                                   vr.query.origin, vr.query.report_time, vr.status,
                                   static_cast<int>(vr.involved_nodes.size()),
                                   static_cast<int>(vr.confirms.size()),
                                   out_dir ? log_name : std::string{}});
    }
  }

  for (int h = 0; h < 24; ++h) {
    const HourAccumulator& a = acc[static_cast<std::size_t>(h)];
    HourlyRow row;
    row.hour = h;
    row.mean_reid_delay_s = a.delay_count ? a.delay_sum / static_cast<double>(a.delay_count) : 0.0;
    row.max_reid_delay_s = a.delay_max;
    row.mean_involved_nodes =
        a.queries ? static_cast<double>(a.involved_sum) / static_cast<double>(a.queries) : 0.0;
    row.total_cost_s = a.cost / static_cast<double>(repetitions);
    row.confirmed_visits = a.delay_count;
    row.visits = a.visits;
    row.queries = a.queries;
    report.hours.push_back(row);
  }

  if (out_dir) {
    write_file_atomic(*out_dir + "/report.csv", report_to_csv(report));
    write_file_atomic(*out_dir + "/runs.csv", runs_to_csv(report));
    nlohmann::json meta;
    meta["config_hash"] = report.config_hash;
    meta["seed"] = report.seed;
    meta["repetitions"] = report.repetitions;
    meta["scenario"] = nlohmann::json::parse(cfg.canonical_json());
    write_file_atomic(*out_dir + "/meta.json", meta.dump(2) + "\n");
  }
  return report;
}

std::string report_to_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "hour,mean_reid_delay_s,max_reid_delay_s,mean_involved_nodes,total_cost_s,"
         "confirmed_visits,visits,queries,repetitions\n";
  for (const HourlyRow& r : report.hours) {
    out << r.hour << ',' << format_seconds(r.mean_reid_delay_s, 6) << ','
        << format_seconds(r.max_reid_delay_s, 6) << ',' << format_seconds(r.mean_involved_nodes, 6)
        << ',' << format_seconds(r.total_cost_s, 6) << ',' << r.confirmed_visits << ',' << r.visits
        << ',' << r.queries << ',' << report.repetitions << '\n';
  }
  return out.str();
}

std::string runs_to_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "rep,voi,seed,plate,origin,report_s,status,involved_nodes,confirmations,event_log\n";
  for (const RunRef& r : report.runs) {
    out << r.rep << ',' << r.voi << ',' << r.seed << ',' << r.plate << ',' << r.origin << ','
        << format_seconds(r.report_s, 3) << ',' << r.status << ',' << r.involved_nodes << ','
        << r.confirmations << ',' << r.event_log << '\n';
  }
  return out.str();
}

IngestSummary run_ingest(const IngestOptions& opt) {
  RoadNetwork net = RoadNetwork::load(opt.network_path);
  require_valid_network(net);
  GeoTable geo = load_geo_table(opt.geo_path);
  GpsParseResult parsed = parse_gps_csv(read_file(opt.gps_path), opt.day_epoch);

  auto snapped = map_match(parsed.records, net, geo, opt.radius_m);
  std::vector<Trajectory> trajectories = extract_trajectories(snapped, opt.gap_threshold);
  TravelStatsResult stats = derive_travel_time_stats(trajectories, net);
  auto [timeline, histogram] = derive_traffic_histogram(trajectories, net, opt.histogram_bucket);

  ensure_directory(opt.out_dir);
  write_file_atomic(opt.out_dir + "/trajectories.txt", trajectories_to_text(trajectories));
  write_file_atomic(opt.out_dir + "/rejects.csv", rejects_to_csv(parsed.rejects));
  write_file_atomic(opt.out_dir + "/network_derived.txt", stats.network.to_text());
  write_file_atomic(opt.out_dir + "/traffic_histogram.csv", histogram_to_csv(histogram));

  IngestSummary summary;
  summary.records = parsed.records.size();
  summary.rejects = parsed.rejects.size();
  summary.vehicles = trajectories.size();
  for (const Trajectory& t : trajectories) summary.visits += t.visits.size();
  return summary;
}

IngestSummary run_stats(const std::string& trajectories_path, const std::string& network_path,
                        const std::string& out_dir, Seconds histogram_bucket) {
  RoadNetwork net = RoadNetwork::load(network_path);
  require_valid_network(net);
  std::vector<Trajectory> trajectories = load_trajectories(trajectories_path);
  TravelStatsResult stats = derive_travel_time_stats(trajectories, net);
  auto [timeline, histogram] = derive_traffic_histogram(trajectories, net, histogram_bucket);

  ensure_directory(out_dir);
  write_file_atomic(out_dir + "/network_derived.txt", stats.network.to_text());
  write_file_atomic(out_dir + "/traffic_histogram.csv", histogram_to_csv(histogram));

  IngestSummary summary;
  summary.vehicles = trajectories.size();
  for (const Trajectory& t : trajectories) summary.visits += t.visits.size();
  return summary;
}

namespace {

ScenarioConfig apply_param(ScenarioConfig cfg, const std::string& key, const std::string& value) {
  auto as_double = [&](const char* what) {
    try {
      return std::stod(value);
    } catch (const std::exception&) {
      throw InputError(std::string("sweep: bad ") + what + " value '" + value + "'");
    }
  };
  if (key == "processors") {
    cfg.processors = static_cast<int>(as_double("processors"));
  } else if (key == "frame_period_s") {
    cfg.frame_period = as_double("frame_period_s");
  } else if (key == "voi_count") {
    cfg.voi_count = static_cast<int>(as_double("voi_count"));
  } else if (key == "seed") {
    cfg.seed = static_cast<std::uint64_t>(as_double("seed"));
  } else if (key == "color_ms" || key == "model_ms" || key == "full_ms") {
    double color = cfg.profile.e1 * 1000.0;
    double model = (cfg.profile.e2 - cfg.profile.e1) * 1000.0;
    double full = (cfg.profile.e3 - cfg.profile.e2) * 1000.0;
    if (key == "color_ms") color = as_double("color_ms");
    if (key == "model_ms") model = as_double("model_ms");
    if (key == "full_ms") full = as_double("full_ms");
    cfg.profile = CascadeProfile::from_module_times(color / 1000.0, model / 1000.0, full / 1000.0);
  } else {
    throw InputError("sweep: unknown parameter '" + key + "'");
  }
  return cfg;
}

}  // namespace

SweepResult run_sweep(const RoadNetwork& net, const ScenarioConfig& base, int repetitions,
                      const std::vector<SweepParam>& grid, const std::string& out_dir,
                      int max_parallel) {
  if (grid.empty()) throw InputError("sweep: empty parameter grid");
  for (const SweepParam& p : grid)
    if (p.values.empty()) throw InputError("sweep: parameter '" + p.key + "' has no values");

  // cartesian product, first parameter varying slowest
  std::vector<std::map<std::string, std::string>> cells{{}};
  for (const SweepParam& p : grid) {
    std::vector<std::map<std::string, std::string>> next;
    for (const auto& cell : cells) {
      for (const std::string& v : p.values) {
        auto extended = cell;
        extended[p.key] = v;
        next.push_back(std::move(extended));
      }
    }
    cells = std::move(next);
  }

  ensure_directory(out_dir);
  SweepResult result;
  result.cells.resize(cells.size());

  unsigned hw = std::thread::hardware_concurrency();
  std::size_t parallel = max_parallel > 0 ? static_cast<std::size_t>(max_parallel)
                                          : std::max(1u, hw == 0 ? 1u : hw);

  auto run_cell = [&](std::size_t idx) {
    SweepCellResult cell;
    cell.cell = static_cast<int>(idx);
    cell.params = cells[idx];
    std::string cell_dir = out_dir + "/cell" + std::to_string(idx);
    try {
      ScenarioConfig cfg = base;
      for (const auto& [key, value] : cell.params) cfg = apply_param(cfg, key, value);
      cell.report = run_experiment(net, cfg, repetitions, &cell_dir);
      cell.status = "ok";
    } catch (const std::exception& e) {
      cell.status = std::string("failed: ") + e.what();
    }
    result.cells[idx] = std::move(cell);
  };

  for (std::size_t begin = 0; begin < cells.size(); begin += parallel) {
    std::vector<std::future<void>> batch;
    std::size_t end = std::min(cells.size(), begin + parallel);
    for (std::size_t i = begin; i < end; ++i)
      batch.push_back(std::async(std::launch::async, run_cell, i));
    for (std::future<void>& f : batch) f.get();
  }

  write_file_atomic(out_dir + "/sweep.csv", sweep_to_csv(result));
  return result;
}

std::string sweep_to_csv(const SweepResult& sweep) {
  std::vector<std::string> param_names;
  if (!sweep.cells.empty())
    for (const auto& [key, value] : sweep.cells.front().params) param_names.push_back(key);

  std::ostringstream out;
  out << "cell";
  for (const std::string& p : param_names) out << ',' << p;
  out << ",status,hour,mean_reid_delay_s,max_reid_delay_s,mean_involved_nodes,total_cost_s,"
         "confirmed_visits,visits,queries\n";
  for (const SweepCellResult& cell : sweep.cells) {
    if (cell.status != "ok") {
      out << cell.cell;
      for (const std::string& p : param_names)
        out << ',' << (cell.params.count(p) ? cell.params.at(p) : "");
      std::string status = cell.status;
      std::replace(status.begin(), status.end(), ',', ';');
      std::replace(status.begin(), status.end(), '\n', ' ');
      out << ',' << status << ",,,,,,,,\n";
      continue;
    }
    for (const HourlyRow& r : cell.report.hours) {
      out << cell.cell;
      for (const std::string& p : param_names)
        out << ',' << (cell.params.count(p) ? cell.params.at(p) : "");
      out << ",ok," << r.hour << ',' << format_seconds(r.mean_reid_delay_s, 6) << ','
          << format_seconds(r.max_reid_delay_s, 6) << ',' << format_seconds(r.mean_involved_nodes, 6)
          << ',' << format_seconds(r.total_cost_s, 6) << ',' << r.confirmed_visits << ',' << r.visits
          << ',' << r.queries << '\n';
    }
  }
  return out.str();
}

}  // namespace edgetrack
