#include "edgetrack/road_network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "edgetrack/errors.hpp"

namespace edgetrack {

void RoadNetwork::add_intersection(IntersectionId id, TravelInterval dwell) {
  intersections_[id] = dwell;
}

void RoadNetwork::add_segment(IntersectionId from, IntersectionId to, TravelInterval travel) {
  out_[from].push_back(segments_.size());
  segments_.push_back(RoadSegment{from, to, travel});
}

bool RoadNetwork::has_intersection(IntersectionId id) const {
  return intersections_.count(id) != 0;
}

const TravelInterval& RoadNetwork::dwell(IntersectionId id) const {
  auto it = intersections_.find(id);
  if (it == intersections_.end())
    throw std::invalid_argument("unknown intersection id " + std::to_string(id));
  return it->second;
}

const TravelInterval* RoadNetwork::find_travel(IntersectionId from, IntersectionId to) const {
  auto it = out_.find(from);
  if (it == out_.end()) return nullptr;
  for (std::size_t idx : it->second) {
    if (segments_[idx].to == to) return &segments_[idx].travel;
  }
  return nullptr;
}

const TravelInterval& RoadNetwork::travel(IntersectionId from, IntersectionId to) const {
  const TravelInterval* t = find_travel(from, to);
  if (!t)
    throw std::invalid_argument("no segment " + std::to_string(from) + " -> " + std::to_string(to));
  return *t;
}

std::vector<IntersectionId> RoadNetwork::neighbors(IntersectionId x) const {
  if (!has_intersection(x))
    throw std::invalid_argument("unknown intersection id " + std::to_string(x));
  std::vector<IntersectionId> out;
  auto it = out_.find(x);
  if (it != out_.end()) {
    for (std::size_t idx : it->second) out.push_back(segments_[idx].to);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Seconds RoadNetwork::relative_deadline(IntersectionId x) const {
  if (!has_intersection(x))
    throw std::invalid_argument("unknown intersection id " + std::to_string(x));
  auto it = out_.find(x);
  if (it == out_.end() || it->second.empty())
    throw std::invalid_argument("dead-end intersection has no deadline: " + std::to_string(x));
  Seconds best = segments_[it->second.front()].travel.lo;
  for (std::size_t idx : it->second) best = std::min(best, segments_[idx].travel.lo);
  return best;
}

std::vector<std::string> RoadNetwork::validate() const {
  std::vector<std::string> violations;
  for (const auto& [id, dwell] : intersections_) {
    if (!(dwell.lo > 0.0))
      violations.push_back("intersection " + std::to_string(id) + ": non-positive dwell lower bound");
    if (dwell.lo > dwell.hi)
      violations.push_back("intersection " + std::to_string(id) + ": dwell lo > hi");
  }
  std::set<std::pair<IntersectionId, IntersectionId>> seen;
  for (const RoadSegment& seg : segments_) {
    std::string name = std::to_string(seg.from) + " -> " + std::to_string(seg.to);
    if (seg.from == seg.to) violations.push_back("segment " + name + ": self loop");
    if (!has_intersection(seg.from)) violations.push_back("segment " + name + ": unknown source");
    if (!has_intersection(seg.to)) violations.push_back("segment " + name + ": unknown target");
    if (!(seg.travel.lo > 0.0)) violations.push_back("segment " + name + ": non-positive travel lower bound");
    if (seg.travel.lo > seg.travel.hi) violations.push_back("segment " + name + ": travel lo > hi");
    if (!seen.insert({seg.from, seg.to}).second)
      violations.push_back("segment " + name + ": duplicate");
  }
  return violations;
}

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

double parse_num(const std::string& tok, int lineno, const char* what) {
  std::size_t pos = 0;
  double v;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    throw InputError("network file line " + std::to_string(lineno) + ": bad " + what + " '" + tok + "'");
  }
  if (pos != tok.size() || !std::isfinite(v))
    throw InputError("network file line " + std::to_string(lineno) + ": bad " + what + " '" + tok + "'");
  return v;
}

IntersectionId parse_id(const std::string& tok, int lineno) {
  try {
    std::size_t pos = 0;
    long long v = std::stoll(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw InputError("network file line " + std::to_string(lineno) + ": bad intersection id '" + tok + "'");
  }
}

}  // namespace

RoadNetwork RoadNetwork::parse(const std::string& text) {
  RoadNetwork net;
  std::istringstream in(text);
  std::string line;
  enum class Section { None, Intersections, Segments } section = Section::None;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t == "[intersections]") { section = Section::Intersections; continue; }
    if (t == "[segments]") { section = Section::Segments; continue; }
    if (t[0] == '[') throw InputError("network file line " + std::to_string(lineno) + ": unknown section " + t);
    std::vector<std::string> f = fields(t);
    switch (section) {
      case Section::None:
        throw InputError("network file line " + std::to_string(lineno) + ": data before section header");
      case Section::Intersections: {
        if (f.size() != 3)
          throw InputError("network file line " + std::to_string(lineno) +
                           ": expected 'id dwell_lo_s dwell_hi_s'");
        net.add_intersection(parse_id(f[0], lineno),
                             {parse_num(f[1], lineno, "dwell_lo_s"), parse_num(f[2], lineno, "dwell_hi_s")});
        break;
      }
      case Section::Segments: {
        if (f.size() != 4)
          throw InputError("network file line " + std::to_string(lineno) + ": expected 'from to lo_s hi_s'");
        net.add_segment(parse_id(f[0], lineno), parse_id(f[1], lineno),
                        {parse_num(f[2], lineno, "lo_s"), parse_num(f[3], lineno, "hi_s")});
        break;
      }
    }
  }
  return net;
}

RoadNetwork RoadNetwork::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open network file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::string RoadNetwork::to_text() const {
  std::ostringstream out;
  out << "[intersections]\n# id dwell_lo_s dwell_hi_s\n";
  for (const auto& [id, dwell] : intersections_)
    out << id << ' ' << format_seconds(dwell.lo, 3) << ' ' << format_seconds(dwell.hi, 3) << '\n';
  out << "[segments]\n# from to lo_s hi_s\n";
  for (const RoadSegment& seg : segments_)
    out << seg.from << ' ' << seg.to << ' ' << format_seconds(seg.travel.lo, 3) << ' '
        << format_seconds(seg.travel.hi, 3) << '\n';
  return out.str();
}

void RoadNetwork::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write network file: " + path);
  out << to_text();
}

RoadNetwork make_grid(int rows, int cols, TravelInterval dwell, TravelInterval travel) {
  RoadNetwork net;
  auto id = [cols](int r, int c) { return static_cast<IntersectionId>(r * cols + c + 1); };
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) net.add_intersection(id(r, c), dwell);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) {
        net.add_segment(id(r, c), id(r, c + 1), travel);
        net.add_segment(id(r, c + 1), id(r, c), travel);
      }
      if (r + 1 < rows) {
        net.add_segment(id(r, c), id(r + 1, c), travel);
        net.add_segment(id(r + 1, c), id(r, c), travel);
      }
    }
  }
  return net;
}

}  // namespace edgetrack
