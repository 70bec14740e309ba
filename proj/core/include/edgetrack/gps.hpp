#pragma once

#include <string>
#include <vector>

#include "edgetrack/types.hpp"

namespace edgetrack {

/// One uploaded GPS sample. Time is an absolute timestamp: clock-of-day from
/// the input anchored to a configured day epoch.
struct GpsRecord {
  std::string plate_id;
  double longitude = 0.0;  // degrees, [-180, 180]
  double latitude = 0.0;   // degrees, [-90, 90]
  Seconds time = 0.0;
  double speed_kmh = 0.0;  // >= 0

  friend bool operator==(const GpsRecord&, const GpsRecord&) = default;
};

/// Malformed row, kept for the rejects report instead of being dropped.
struct GpsReject {
  int row = 0;  // 1-based data row number (header not counted)
  std::string line;
  std::string reason;
};

struct GpsParseResult {
  std::vector<GpsRecord> records;  // file order
  std::vector<GpsReject> rejects;
};

/// Parses comma-separated GPS data with a header row naming the columns
/// plate_id, longitude, latitude, time, speed (in that order). Rows that fail
/// validation become reject entries; a bad header is a hard error.
/// day_epoch anchors the time-of-day strings to absolute seconds.
GpsParseResult parse_gps_csv(const std::string& text, Seconds day_epoch = 0.0);

/// Rejects report: input columns plus a reason column.
std::string rejects_to_csv(const std::vector<GpsReject>& rejects);

}  // namespace edgetrack
