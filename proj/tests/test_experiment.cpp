#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "edgetrack/errors.hpp"
#include "edgetrack/experiment.hpp"
#include "edgetrack/io.hpp"
#include "edgetrack/scenario.hpp"
#include "test_helpers.hpp"

using namespace edgetrack;
namespace fs = std::filesystem;

namespace {

ScenarioConfig small_scenario() {
  ScenarioConfig cfg;
  cfg.seed = 21;
  cfg.duration = 1200.0;
  cfg.arrival.default_per_min = {1.0};
  cfg.trip_continue_prob = 0.5;
  cfg.vois.push_back(VoiSpec{1, 60.0, true, {1, 2, 6, 7}, "silver", "glb_suv"});
  return cfg;
}

std::string slurp(const fs::path& p) { return read_file(p.string()); }

}  // namespace

TEST_CASE("experiment writes the full report bundle") {
  fs::path dir = test::fresh_dir("exp_bundle");
  std::string out = dir.string();
  ExperimentReport report = run_experiment(test::grid4(), small_scenario(), 2, &out);

  CHECK(report.hours.size() == 24);
  CHECK(report.runs.size() == 2);  // one query, two repetitions
  CHECK(!report.config_hash.empty());
  CHECK(fs::exists(dir / "report.csv"));
  CHECK(fs::exists(dir / "runs.csv"));
  CHECK(fs::exists(dir / "meta.json"));
  CHECK(fs::exists(dir / "events_r0.log"));
  CHECK(fs::exists(dir / "events_r1.log"));

  std::string csv = slurp(dir / "report.csv");
  CHECK(csv.rfind("hour,mean_reid_delay_s,", 0) == 0);
  // query placed in hour 0
  CHECK(report.hours[0].queries == 2);
  CHECK(report.hours[0].mean_involved_nodes > 0);
}

TEST_CASE("rerunning an experiment yields byte-identical outputs") {
  fs::path a = test::fresh_dir("exp_det_a");
  fs::path b = test::fresh_dir("exp_det_b");
  std::string sa = a.string(), sb = b.string();
  run_experiment(test::grid4(), small_scenario(), 2, &sa);
  run_experiment(test::grid4(), small_scenario(), 2, &sb);
  for (const char* name :
       {"report.csv", "runs.csv", "meta.json", "events_r0.log", "events_r1.log"}) {
    CHECK(slurp(a / name) == slurp(b / name));
  }
}

TEST_CASE("config hash tracks effective configuration") {
  ScenarioConfig cfg = small_scenario();
  std::string h1 = fnv1a_hex(cfg.canonical_json());
  cfg.processors = 8;
  std::string h2 = fnv1a_hex(cfg.canonical_json());
  CHECK(h1 != h2);
}

TEST_CASE("scenario json round trips through the parser") {
  const char* text = R"({
    "seed": 5, "duration_s": 600, "processors": 8,
    "cascade_ms": {"color": 0.5, "model": 40.6, "full": 310.1},
    "arrival": {"default_per_min": [2.0], "overrides": [{"intersection": 6, "per_min": [9.0]}]},
    "palette": [["silver", 2.0], "black"],
    "vois": [{"origin": 1, "report_s": 30, "path": [1, 2], "color": "silver"}],
    "tracking": {"case2_literal_dwell": true}
  })";
  ScenarioConfig cfg = ScenarioConfig::from_json_text(text);
  CHECK(cfg.seed == 5);
  CHECK(cfg.processors == 8);
  CHECK(cfg.arrival.rate_at(6, 0.0) == doctest::Approx(9.0));
  CHECK(cfg.arrival.rate_at(7, 0.0) == doctest::Approx(2.0));
  CHECK(cfg.palette.values.size() == 2);
  CHECK(cfg.palette.weights[0] == doctest::Approx(2.0));
  CHECK(cfg.vois.size() == 1);
  CHECK(cfg.vois[0].synthesize);  // a path implies synthesis
  CHECK(cfg.case2_literal_dwell);
  CHECK(cfg.validate(test::grid4()).empty());

  CHECK_THROWS_AS(ScenarioConfig::from_json_text("{nope"), InputError);
  CHECK_THROWS_AS(ScenarioConfig::from_json_text(R"({"palette": 3})"), InputError);
}

TEST_CASE("single-cell sweep reproduces the track report") {
  fs::path track_dir = test::fresh_dir("sweep_track");
  fs::path sweep_dir = test::fresh_dir("sweep_grid");
  std::string st = track_dir.string();

  ScenarioConfig cfg = small_scenario();
  ExperimentReport direct = run_experiment(test::grid4(), cfg, 1, &st);

  SweepResult sweep = run_sweep(test::grid4(), cfg, 1, {{"processors", {"20"}}},
                                sweep_dir.string());
  REQUIRE(sweep.cells.size() == 1);
  CHECK(sweep.cells[0].status == "ok");
  const ExperimentReport& cell = sweep.cells[0].report;
  REQUIRE(cell.hours.size() == direct.hours.size());
  for (std::size_t h = 0; h < cell.hours.size(); ++h) {
    CHECK(cell.hours[h].mean_reid_delay_s == direct.hours[h].mean_reid_delay_s);
    CHECK(cell.hours[h].mean_involved_nodes == direct.hours[h].mean_involved_nodes);
    CHECK(cell.hours[h].total_cost_s == direct.hours[h].total_cost_s);
  }
  CHECK(fs::exists(sweep_dir / "sweep.csv"));
  CHECK(fs::exists(sweep_dir / "cell0" / "report.csv"));
  // cell files match the direct run byte for byte
  CHECK(slurp(sweep_dir / "cell0" / "report.csv") == slurp(track_dir / "report.csv"));
}

TEST_CASE("sweep continues past failing cells") {
  ScenarioConfig cfg = small_scenario();
  fs::path dir = test::fresh_dir("sweep_fail");
  // frame_period 0 is invalid; the other cell still runs
  SweepResult sweep = run_sweep(test::grid4(), cfg, 1,
                                {{"frame_period_s", {"0", "0.0416667"}}}, dir.string());
  REQUIRE(sweep.cells.size() == 2);
  CHECK(sweep.cells[0].status != "ok");
  CHECK(sweep.cells[1].status == "ok");
  std::string csv = slurp(dir / "sweep.csv");
  CHECK(csv.find("failed:") != std::string::npos);
}

TEST_CASE("sweep over processor counts never worsens hourly delay with more processors") {
  ScenarioConfig cfg = small_scenario();
  cfg.arrival.default_per_min = {3.0};
  SweepResult sweep = run_sweep(test::grid4(), cfg, 1, {{"processors", {"4", "20"}}},
                                test::fresh_dir("sweep_mono").string());
  REQUIRE(sweep.cells.size() == 2);
  REQUIRE(sweep.cells[0].status == "ok");
  REQUIRE(sweep.cells[1].status == "ok");
  for (std::size_t h = 0; h < 24; ++h) {
    CHECK(sweep.cells[1].report.hours[h].mean_reid_delay_s <=
          sweep.cells[0].report.hours[h].mean_reid_delay_s + 1e-9);
  }
}

TEST_CASE("sweep over query counts preserves the expected ordering") {
  // more tracked targets: at least as much cost and involvement, comparable delay
  RoadNetwork net = test::grid5();
  ScenarioConfig cfg;
  cfg.seed = 55;
  cfg.start = 7.0 * 3600.0;
  cfg.duration = 3600.0;
  cfg.trip_continue_prob = 0.45;
  cfg.max_hops = 6;
  cfg.arrival.default_per_min = {1.2};
  std::vector<double> center(24, 1.2);
  center[7] = 60.0;
  cfg.arrival.overrides[13] = center;
  for (int k = 0; k < 5; ++k)
    cfg.vois.push_back(VoiSpec{11, 7.0 * 3600.0 + 300.0 + 30.0 * k, true,
                               {11, 12, 13, 14, 15}, "silver", "glb_suv"});

  SweepResult sweep = run_sweep(net, cfg, 1, {{"voi_count", {"1", "3", "5"}}},
                                test::fresh_dir("sweep_vois").string());
  REQUIRE(sweep.cells.size() == 3);
  for (const auto& cell : sweep.cells) REQUIRE(cell.status == "ok");

  auto total_cost = [](const ExperimentReport& r) {
    double c = 0;
    for (const HourlyRow& h : r.hours) c += h.total_cost_s;
    return c;
  };
  auto total_involved = [](const ExperimentReport& r) {
    int n = 0;
    for (const RunRef& run : r.runs) n += run.involved_nodes;
    return n;
  };
  double c1 = total_cost(sweep.cells[0].report);
  double c3 = total_cost(sweep.cells[1].report);
  double c5 = total_cost(sweep.cells[2].report);
  CHECK(c1 < c3);
  CHECK(c3 < c5);
  CHECK(total_involved(sweep.cells[0].report) <= total_involved(sweep.cells[1].report));
  CHECK(total_involved(sweep.cells[1].report) <= total_involved(sweep.cells[2].report));
  // tracked targets resolve in comparable time regardless of how many run
  double d1 = sweep.cells[0].report.hours[7].mean_reid_delay_s;
  double d5 = sweep.cells[2].report.hours[7].mean_reid_delay_s;
  REQUIRE(d1 > 0);
  CHECK(d5 >= 0.5 * d1);
  CHECK(d5 <= 2.0 * d1);
}

TEST_CASE("ingest pipeline produces trajectories with known ground truth") {
  fs::path dir = test::fresh_dir("ingest");
  // two intersections 1km apart; vehicle dwells at 1 then moves to 2
  write_file_atomic((dir / "net.txt").string(),
                    "[intersections]\n1 3 42\n2 3 42\n[segments]\n1 2 30 50\n2 1 30 50\n");
  write_file_atomic((dir / "geo.txt").string(),
                    "# id lon lat\n1 114.000 22.500\n2 114.010 22.500\n");
  write_file_atomic((dir / "gps.csv").string(),
                    "plate_id,longitude,latitude,time,speed\n"
                    "CAR1,114.0000,22.5000,08:00:00,10\n"
                    "CAR1,114.0001,22.5000,08:00:05,10\n"
                    "CAR1,114.0100,22.5000,08:00:45,30\n"
                    "CAR1,114.0999,22.9999,08:01:20,30\n"  // far away: discarded
                    "CAR2,114.0100,22.5001,08:10:00,0\n"
                    "BAD,200.0,22.5,08:00:00,1\n");
  IngestOptions opt;
  opt.gps_path = (dir / "gps.csv").string();
  opt.network_path = (dir / "net.txt").string();
  opt.geo_path = (dir / "geo.txt").string();
  opt.out_dir = (dir / "out").string();
  opt.radius_m = 150.0;
  IngestSummary s = run_ingest(opt);
  CHECK(s.records == 5);
  CHECK(s.rejects == 1);
  CHECK(s.vehicles == 2);
  CHECK(s.visits == 3);  // CAR1: visit at 1 (merged) + visit at 2; CAR2: visit at 2

  auto trajectories = load_trajectories((opt.out_dir + "/trajectories.txt"));
  REQUIRE(trajectories.size() == 2);
  CHECK(trajectories[0].plate_id == "CAR1");
  REQUIRE(trajectories[0].visits.size() == 2);
  CHECK(trajectories[0].visits[0].intersection == 1);
  CHECK(trajectories[0].visits[0].leave - trajectories[0].visits[0].enter == doctest::Approx(5.0));
  CHECK(slurp(fs::path(opt.out_dir) / "rejects.csv").find("longitude out of range") !=
        std::string::npos);

  // derived segment interval reflects the observed 40 s hop
  RoadNetwork derived = RoadNetwork::load(opt.out_dir + "/network_derived.txt");
  CHECK(derived.travel(1, 2).lo == doctest::Approx(40.0));
  CHECK(derived.travel(1, 2).hi == doctest::Approx(40.0));
}

TEST_CASE("ingest with an empty gps body writes empty outputs") {
  fs::path dir = test::fresh_dir("ingest_empty");
  write_file_atomic((dir / "net.txt").string(),
                    "[intersections]\n1 3 42\n2 3 42\n[segments]\n1 2 30 50\n2 1 30 50\n");
  write_file_atomic((dir / "geo.txt").string(), "1 114.0 22.5\n2 114.01 22.5\n");
  write_file_atomic((dir / "gps.csv").string(), "plate_id,longitude,latitude,time,speed\n");
  IngestOptions opt;
  opt.gps_path = (dir / "gps.csv").string();
  opt.network_path = (dir / "net.txt").string();
  opt.geo_path = (dir / "geo.txt").string();
  opt.out_dir = (dir / "out").string();
  IngestSummary s = run_ingest(opt);
  CHECK(s.records == 0);
  CHECK(s.vehicles == 0);
  CHECK(fs::exists(fs::path(opt.out_dir) / "trajectories.txt"));
}

TEST_CASE("corrupt gps header leaves no partial outputs") {
  fs::path dir = test::fresh_dir("ingest_corrupt");
  write_file_atomic((dir / "net.txt").string(),
                    "[intersections]\n1 3 42\n2 3 42\n[segments]\n1 2 30 50\n2 1 30 50\n");
  write_file_atomic((dir / "geo.txt").string(), "1 114.0 22.5\n2 114.01 22.5\n");
  write_file_atomic((dir / "gps.csv").string(), "who,knows\n1,2\n");
  IngestOptions opt;
  opt.gps_path = (dir / "gps.csv").string();
  opt.network_path = (dir / "net.txt").string();
  opt.geo_path = (dir / "geo.txt").string();
  opt.out_dir = (dir / "out").string();
  CHECK_THROWS_AS(run_ingest(opt), InputError);
  CHECK_FALSE(fs::exists(fs::path(opt.out_dir) / "trajectories.txt"));
}

TEST_CASE("stats command derives intervals from a trajectory file") {
  fs::path dir = test::fresh_dir("stats_cmd");
  write_file_atomic((dir / "net.txt").string(),
                    "[intersections]\n1 3 42\n2 3 42\n[segments]\n1 2 30 50\n2 1 30 50\n");
  std::vector<Trajectory> ts{test::path_trajectory("A", {1, 2}, 0.0, 7.0, 33.0)};
  save_trajectories(ts, (dir / "traj.txt").string());
  IngestSummary s =
      run_stats((dir / "traj.txt").string(), (dir / "net.txt").string(), (dir / "out").string());
  CHECK(s.vehicles == 1);
  RoadNetwork derived = RoadNetwork::load((dir / "out").string() + "/network_derived.txt");
  CHECK(derived.dwell(1) == TravelInterval{7.0, 7.0});
  CHECK(derived.travel(1, 2) == TravelInterval{33.0, 33.0});
}

TEST_CASE("overloading a node beyond color-only matching is an infeasible scenario") {
  // deadline (min outgoing travel) below the color-only bound p + e1
  RoadNetwork net;
  net.add_intersection(1, {3, 42});
  net.add_intersection(2, {3, 42});
  net.add_segment(1, 2, {0.04, 5.0});
  net.add_segment(2, 1, {0.04, 5.0});
  ScenarioConfig cfg;
  cfg.seed = 3;
  cfg.duration = 60.0;
  cfg.arrival.default_per_min = {0.0};
  cfg.vois.push_back(VoiSpec{1, 10.0, true, {1, 2}, "silver", "glb_suv"});
  CHECK_THROWS_AS(run_experiment(net, cfg, 1, nullptr), InfeasibleError);
  try {
    run_experiment(net, cfg, 1, nullptr);
  } catch (const InfeasibleError& e) {
    std::string what = e.what();
    CHECK(what.find("intersection 1") != std::string::npos);
    CHECK(what.find("frame t=") != std::string::npos);
  }
}
