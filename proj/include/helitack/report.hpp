#pragma once

#include "helitack/episode_log.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace helitack::report {

inline constexpr int kSchemaVersion = 1;

struct ReportConfig {
  double gallons_per_drop = 800.0;
  int zones_per_side = 4;
  int top_zones = 3;
  double alignment_weight = 0.5;
  std::vector<double> contingency_fractions = {0.05, 0.10, 0.25, 0.50};
};

struct ForecastInfo {
  double lat = 0.0;
  double lon = 0.0;
  std::string ignition_datetime;
  double confidence = 0.0;
  friend bool operator==(const ForecastInfo&, const ForecastInfo&) = default;
};

struct DropEntry {
  int step = 0;
  double sim_time_min = 0.0;
  int row = 0;
  int col = 0;
  std::optional<GeoRef> geo;
  int extinguished = 0;
  friend bool operator==(const DropEntry&, const DropEntry&) = default;
};

struct Suppression {
  std::vector<DropEntry> drops;
  int helitack_count = 0;
  double water_gal = 0.0;
  std::optional<int> containment_step;
  friend bool operator==(const Suppression&, const Suppression&) = default;
};

struct Burn {
  std::vector<int> trajectory; // burnt count per step, [0] = reset
  int peak_burning = 0;
  int final_burnt = 0;
  double final_burnt_area_m2 = 0.0;
  friend bool operator==(const Burn&, const Burn&) = default;
};

/// Half-open cell rectangle [row0, row1) x [col0, col1).
struct Zone {
  int row0 = 0;
  int col0 = 0;
  int row1 = 0;
  int col1 = 0;
  friend bool operator==(const Zone&, const Zone&) = default;
};

struct Advisory {
  Zone zone;
  double priority = 0.0;
  double burnt_density = 0.0;
  double alignment = 0.0;
  std::string rationale;
  friend bool operator==(const Advisory&, const Advisory&) = default;
};

// First step at which the burnt fraction reached each threshold.
struct Threshold {
  double burnt_fraction = 0.0;
  std::optional<int> reached_step;
  friend bool operator==(const Threshold&, const Threshold&) = default;
};

struct Contingency {
  int max_steps = 0;
  std::string outcome; // "contained" or "max_steps"
  double final_burnt_fraction = 0.0;
  std::vector<Threshold> thresholds;
  friend bool operator==(const Contingency&, const Contingency&) = default;
};

struct ThreatReport {
  int schema_version = kSchemaVersion;
  int width = 0;
  int height = 0;
  double cell_size_m = 0.0;
  std::optional<ForecastInfo> forecast;
  Suppression suppression;
  Burn burn;
  std::vector<Advisory> advisories;
  Contingency contingency;
  friend bool operator==(const ThreatReport&, const ThreatReport&) = default;
};

// Geographic position of a cell when the forecast anchors the grid centre.
GeoRef cell_to_geo(const Forecast& anchor, int width, int height, double cell_size_m, int row,
                   int col);

// Every 4x4 partition zone, row-major; zones tile the grid exactly.
std::vector<Zone> partition(int width, int height, int per_side);

// `forecast` overrides the one recorded in the log. Throws ContractError
// when the episode has not finished.
ThreatReport build_report(const EpisodeLog& log, const ReportConfig& config = {},
                          const std::optional<Forecast>& forecast = std::nullopt);

enum class Format { Text, Structured };
std::optional<Format> parse_format(std::string_view s);

std::string render_report(const ThreatReport& r, Format format);
std::string render_text(const ThreatReport& r);
std::string render_structured(const ThreatReport& r);
ThreatReport parse_structured(std::string_view document);

} // namespace helitack::report
