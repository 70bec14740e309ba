#include "edgetrack/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "edgetrack/errors.hpp"
#include "json.hpp"

namespace edgetrack {

using nlohmann::json;

double RateProfile::rate_at(IntersectionId node, Seconds t) const {
  const std::vector<double>* profile = &default_per_min;
  if (auto it = overrides.find(node); it != overrides.end()) profile = &it->second;
  if (profile->empty()) return 0.0;
  int hour = hour_of_day(t);
  return (*profile)[static_cast<std::size_t>(hour) % profile->size()];
}

namespace {

AttributeDistribution parse_distribution(const json& j, const char* what) {
  AttributeDistribution dist;
  if (!j.is_array()) throw InputError(std::string(what) + " must be an array");
  for (const json& entry : j) {
    if (entry.is_string()) {
      dist.values.push_back(entry.get<std::string>());
      dist.weights.push_back(1.0);
    } else if (entry.is_array() && entry.size() == 2 && entry[0].is_string() &&
               entry[1].is_number()) {
      dist.values.push_back(entry[0].get<std::string>());
      dist.weights.push_back(entry[1].get<double>());
    } else {
      throw InputError(std::string(what) + " entries must be \"name\" or [\"name\", weight]");
    }
  }
  return dist;
}

std::vector<double> parse_rates(const json& j, const char* what) {
  std::vector<double> rates;
  if (j.is_number()) {
    rates.push_back(j.get<double>());
  } else if (j.is_array()) {
    for (const json& v : j) {
      if (!v.is_number()) throw InputError(std::string(what) + " must contain numbers");
      rates.push_back(v.get<double>());
    }
  } else {
    throw InputError(std::string(what) + " must be a number or an array of numbers");
  }
  if (rates.empty()) throw InputError(std::string(what) + " must not be empty");
  return rates;
}

json distribution_to_json(const AttributeDistribution& dist) {
  json arr = json::array();
  for (std::size_t i = 0; i < dist.values.size(); ++i) {
    double w = i < dist.weights.size() ? dist.weights[i] : 1.0;
    arr.push_back(json::array({dist.values[i], w}));
  }
  return arr;
}

}  // namespace

ScenarioConfig ScenarioConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("scenario config: ") + e.what());
  }
  ScenarioConfig cfg;
  try {
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("start_s")) cfg.start = j.at("start_s").get<double>();
    if (j.contains("duration_s")) cfg.duration = j.at("duration_s").get<double>();
    if (j.contains("frame_period_s")) cfg.frame_period = j.at("frame_period_s").get<double>();
    if (j.contains("processors")) cfg.processors = j.at("processors").get<int>();
    if (j.contains("cascade_ms")) {
      const json& c = j.at("cascade_ms");
      cfg.profile = CascadeProfile::from_module_times(c.at("color").get<double>() / 1000.0,
                                                      c.at("model").get<double>() / 1000.0,
                                                      c.at("full").get<double>() / 1000.0);
    }
    if (j.contains("palette")) cfg.palette = parse_distribution(j.at("palette"), "palette");
    if (j.contains("catalog")) cfg.catalog = parse_distribution(j.at("catalog"), "catalog");
    if (j.contains("arrival")) {
      const json& a = j.at("arrival");
      if (a.contains("default_per_min"))
        cfg.arrival.default_per_min = parse_rates(a.at("default_per_min"), "arrival.default_per_min");
      if (a.contains("overrides")) {
        for (const json& o : a.at("overrides")) {
          cfg.arrival.overrides[o.at("intersection").get<IntersectionId>()] =
              parse_rates(o.at("per_min"), "arrival.overrides.per_min");
        }
      }
    }
    if (j.contains("trip")) {
      const json& t = j.at("trip");
      if (t.contains("continue_prob")) cfg.trip_continue_prob = t.at("continue_prob").get<double>();
      if (t.contains("max_hops")) cfg.max_hops = t.at("max_hops").get<int>();
    }
    if (j.contains("vois")) {
      for (const json& v : j.at("vois")) {
        VoiSpec spec;
        spec.origin = v.at("origin").get<IntersectionId>();
        spec.report_time = v.at("report_s").get<double>();
        if (v.contains("synthesize")) spec.synthesize = v.at("synthesize").get<bool>();
        if (v.contains("path")) {
          for (const json& id : v.at("path")) spec.path.push_back(id.get<IntersectionId>());
          spec.synthesize = true;
        }
        if (v.contains("color")) spec.color = v.at("color").get<std::string>();
        if (v.contains("make_model")) spec.make_model = v.at("make_model").get<std::string>();
        cfg.vois.push_back(std::move(spec));
      }
    }
    if (j.contains("voi_count") && !j.at("voi_count").is_null())
      cfg.voi_count = j.at("voi_count").get<int>();
    if (j.contains("tracking")) {
      const json& t = j.at("tracking");
      if (t.contains("case2_literal_dwell"))
        cfg.case2_literal_dwell = t.at("case2_literal_dwell").get<bool>();
      if (t.contains("histogram_bucket_s"))
        cfg.histogram_bucket = t.at("histogram_bucket_s").get<double>();
      if (t.contains("horizon_slack_s")) cfg.horizon_slack = t.at("horizon_slack_s").get<double>();
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("scenario config: ") + e.what());
  }
  return cfg;
}

ScenarioConfig ScenarioConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open scenario config: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

std::string ScenarioConfig::canonical_json() const {
  json j;
  j["seed"] = seed;
  j["start_s"] = start;
  j["duration_s"] = duration;
  j["frame_period_s"] = frame_period;
  j["processors"] = processors;
  j["cascade_ms"] = {{"color", profile.e1 * 1000.0},
                     {"model", (profile.e2 - profile.e1) * 1000.0},
                     {"full", (profile.e3 - profile.e2) * 1000.0}};
  j["palette"] = distribution_to_json(palette);
  j["catalog"] = distribution_to_json(catalog);
  json overrides = json::array();
  for (const auto& [node, rates] : arrival.overrides)
    overrides.push_back({{"intersection", node}, {"per_min", rates}});
  j["arrival"] = {{"default_per_min", arrival.default_per_min}, {"overrides", overrides}};
  j["trip"] = {{"continue_prob", trip_continue_prob}, {"max_hops", max_hops}};
  json vois_json = json::array();
  for (const VoiSpec& v : vois) {
    json vj = {{"origin", v.origin},
               {"report_s", v.report_time},
               {"synthesize", v.synthesize},
               {"color", v.color},
               {"make_model", v.make_model}};
    vj["path"] = v.path;
    vois_json.push_back(vj);
  }
  j["vois"] = vois_json;
  j["voi_count"] = voi_count ? json(*voi_count) : json(nullptr);
  j["tracking"] = {{"case2_literal_dwell", case2_literal_dwell},
                   {"histogram_bucket_s", histogram_bucket},
                   {"horizon_slack_s", horizon_slack}};
  return j.dump();
}

std::vector<std::string> ScenarioConfig::validate(const RoadNetwork& net) const {
  std::vector<std::string> problems;
  if (!(duration >= 0.0)) problems.push_back("duration_s must be non-negative");
  if (!(frame_period > 0.0)) problems.push_back("frame_period_s must be positive");
  if (processors < 1) problems.push_back("processors must be positive");
  if (!profile.valid()) problems.push_back("cascade module times must be positive");
  if (palette.values.empty()) problems.push_back("palette must not be empty");
  if (catalog.values.empty()) problems.push_back("catalog must not be empty");
  if (trip_continue_prob < 0.0 || trip_continue_prob > 1.0)
    problems.push_back("trip.continue_prob must be in [0, 1]");
  if (max_hops < 1) problems.push_back("trip.max_hops must be positive");
  if (!(histogram_bucket > 0.0)) problems.push_back("histogram_bucket_s must be positive");
  auto check_rates = [&problems](const std::vector<double>& rates, const std::string& what) {
    for (double r : rates)
      if (!(r >= 0.0) || !std::isfinite(r)) {
        problems.push_back(what + " has a negative or non-finite rate");
        break;
      }
  };
  check_rates(arrival.default_per_min, "arrival.default_per_min");
  for (const auto& [node, rates] : arrival.overrides) {
    check_rates(rates, "arrival override for intersection " + std::to_string(node));
    if (!net.has_intersection(node))
      problems.push_back("arrival override references unknown intersection " + std::to_string(node));
  }
  if (voi_count && (*voi_count < 0 || static_cast<std::size_t>(*voi_count) > vois.size()))
    problems.push_back("voi_count out of range");
  for (std::size_t i = 0; i < vois.size(); ++i) {
    const VoiSpec& v = vois[i];
    std::string tag = "vois[" + std::to_string(i) + "]";
    if (!net.has_intersection(v.origin)) problems.push_back(tag + ": origin not in network");
    if (!v.path.empty()) {
      if (v.path.front() != v.origin) problems.push_back(tag + ": path must start at origin");
      for (std::size_t k = 0; k + 1 < v.path.size(); ++k)
        if (!net.find_travel(v.path[k], v.path[k + 1]))
          problems.push_back(tag + ": path hop " + std::to_string(v.path[k]) + " -> " +
                             std::to_string(v.path[k + 1]) + " has no segment");
    }
  }
  return problems;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace edgetrack
