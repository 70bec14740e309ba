#include "edgetrack/gps.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "edgetrack/errors.hpp"

namespace edgetrack {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string normalize(std::string s) {
  std::string out;
  for (char c : s) {
    if (std::isalnum(static_cast<unsigned char>(c))) out += static_cast<char>(std::tolower(c));
  }
  return out;
}

std::string trimmed(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& tok, double* out) {
  try {
    std::size_t pos = 0;
    double v = std::stod(tok, &pos);
    if (pos != tok.size() || !std::isfinite(v)) return false;
    *out = v;
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

// "HH:MM:SS" clock time; also accepts a plain non-negative number of seconds.
bool parse_time(const std::string& tok, Seconds* out) {
  if (tok.find(':') == std::string::npos) {
    double v;
    if (!parse_double(tok, &v) || v < 0) return false;
    *out = v;
    return true;
  }
  int h = 0, m = 0, s = 0;
  char c1 = 0, c2 = 0;
  std::istringstream is(tok);
  if (!(is >> h >> c1 >> m >> c2 >> s) || c1 != ':' || c2 != ':') return false;
  if (!is.eof()) return false;
  if (h < 0 || h > 23 || m < 0 || m > 59 || s < 0 || s > 60) return false;
  *out = h * 3600.0 + m * 60.0 + s;
  return true;
}

}  // namespace

GpsParseResult parse_gps_csv(const std::string& text, Seconds day_epoch) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw InputError("gps file: missing header");

  static const char* kExpected[5] = {"plateid", "longitude", "latitude", "time", "speed"};
  std::vector<std::string> header = split_csv(line);
  if (header.size() < 5) throw InputError("gps file: header needs 5 columns, got " +
                                          std::to_string(header.size()));
  for (int i = 0; i < 5; ++i) {
    if (normalize(header[i]) != kExpected[i])
      throw InputError(std::string("gps file: header column ") + std::to_string(i + 1) +
                       " must be '" + kExpected[i] + "', got '" + trimmed(header[i]) + "'");
  }

  GpsParseResult result;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (trimmed(line).empty()) continue;
    std::vector<std::string> f = split_csv(line);
    auto reject = [&](const std::string& reason) {
      result.rejects.push_back(GpsReject{row, line, reason});
    };
    if (f.size() != 5) {
      reject("expected 5 fields, got " + std::to_string(f.size()));
      continue;
    }
    GpsRecord rec;
    rec.plate_id = trimmed(f[0]);
    if (rec.plate_id.empty()) {
      reject("empty plate id");
      continue;
    }
    if (!parse_double(trimmed(f[1]), &rec.longitude)) {
      reject("bad longitude");
      continue;
    }
    if (rec.longitude < -180.0 || rec.longitude > 180.0) {
      reject("longitude out of range");
      continue;
    }
    if (!parse_double(trimmed(f[2]), &rec.latitude)) {
      reject("bad latitude");
      continue;
    }
    if (rec.latitude < -90.0 || rec.latitude > 90.0) {
      reject("latitude out of range");
      continue;
    }
    Seconds tod;
    if (!parse_time(trimmed(f[3]), &tod)) {
      reject("bad time");
      continue;
    }
    rec.time = day_epoch + tod;
    std::string speed_tok = trimmed(f[4]);
    // tolerate a trailing unit, e.g. "22 km/h"
    if (auto pos = speed_tok.find(" km/h"); pos != std::string::npos)
      speed_tok = trimmed(speed_tok.substr(0, pos));
    if (!parse_double(speed_tok, &rec.speed_kmh)) {
      reject("bad speed");
      continue;
    }
    if (rec.speed_kmh < 0) {
      reject("negative speed");
      continue;
    }
    result.records.push_back(std::move(rec));
  }
  return result;
}

std::string rejects_to_csv(const std::vector<GpsReject>& rejects) {
  std::ostringstream out;
  out << "row,line,reason\n";
  for (const GpsReject& r : rejects) {
    std::string quoted = r.line;
    std::replace(quoted.begin(), quoted.end(), '"', '\'');
    out << r.row << ",\"" << quoted << "\"," << r.reason << '\n';
  }
  return out.str();
}

}  // namespace edgetrack
