#pragma once

#include "helitack/terrain.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace helitack::dataset {

inline constexpr double kEarthRadiusKm = 6371.0;

double haversine_km(const GeoRef& a, const GeoRef& b);

// Point `distance_km` away along initial `bearing_rad` (clockwise from north).
GeoRef destination(const GeoRef& from, double bearing_rad, double distance_km);

// ---- time ---------------------------------------------------------------

// Days since 1970-01-01 (may be negative).
using Day = std::int64_t;

// "YYYY-MM-DD"; nullopt when malformed or not a real date.
std::optional<Day> parse_date(std::string_view s);
std::string format_date(Day d);

// "YYYY-MM-DD", "YYYY-MM-DDTHH:MM[:SS][Z]" or "YYYY-MM-DD HH:MM[:SS]", UTC.
// Seconds since the epoch.
std::optional<std::int64_t> parse_timestamp(std::string_view s);
Day day_of(std::int64_t seconds);

// ---- records ------------------------------------------------------------

struct IncidentRecord {
  double lat = 0.0;
  double lon = 0.0;
  std::int64_t discovered_at = 0; // seconds since the epoch, UTC
  friend bool operator==(const IncidentRecord&, const IncidentRecord&) = default;
};

struct BBox {
  double lat_min, lat_max, lon_min, lon_max;
  bool contains(double lat, double lon) const {
    return lat >= lat_min && lat <= lat_max && lon >= lon_min && lon <= lon_max;
  }
};

inline constexpr BBox kConus{24.4, 49.4, -125.0, -66.9};

/// Row-level problem found while reading an input table. Row 1 is the header.
struct Diagnostic {
  std::size_t row = 0;
  std::string reason;
};

// Structured diagnostic line: {"row":N,"reason":"..."}
std::string to_json_line(const Diagnostic& d);

// CSV with latitude, longitude and discovered_at (or datetime) columns.
std::vector<IncidentRecord> read_incidents(std::istream& in, std::vector<Diagnostic>& diags);
void write_incidents(std::ostream& out, const std::vector<IncidentRecord>& records);

struct DedupConfig {
  double min_km = 5.0;
  double min_hours = 2.0;
  BBox bbox = kConus;
};

// Time-ordered scan: a record is kept when it lies in the bbox, is >= min_km
// from every kept record of the same UTC day, and is >= min_hours after
// every kept record within min_km. Sorts (stably) by time first.
std::vector<IncidentRecord> dedup_incidents(std::vector<IncidentRecord> records,
                                            const DedupConfig& config = {});

// ---- negatives ----------------------------------------------------------

enum class Label { NoWildfire, Wildfire };
enum class Tier { Positive, FarNeg, NearNeg, YearlyNeg };

std::string_view to_string(Tier t);
std::optional<Tier> parse_tier(std::string_view s);

struct LabeledSample {
  double lat = 0.0;
  double lon = 0.0;
  Day date = 0;
  Label label = Label::NoWildfire;
  Tier tier = Tier::Positive;
  std::int64_t source = -1; // index of the originating positive; -1 for Positive/FarNeg
  friend bool operator==(const LabeledSample&, const LabeledSample&) = default;
};

std::vector<LabeledSample> as_positives(const std::vector<IncidentRecord>& records);

struct NegativeCounts {
  std::size_t far = 5000;
  std::size_t near = 35000;
  std::size_t yearly = 36000;
};

struct NegativeConfig {
  NegativeCounts counts;
  double far_min_km = 100.0;
  double near_max_jitter_km = 100.0;
  int near_min_days = 90;
  int near_max_days = 150;
  int yearly_days = 365;
  double conflict_km = 5.0;
  int conflict_days = 1;
  std::size_t attempts_per_sample = 200;
  std::uint64_t seed = 0;
};

struct NegativeResult {
  std::vector<LabeledSample> samples; // far, then near, then yearly
  NegativeCounts achieved{0, 0, 0};
  NegativeCounts shortfall{0, 0, 0};
};

// Polygon vertices as (lat, lon); the ring closes implicitly.
using Polygon = std::vector<GeoRef>;
Polygon bbox_polygon(const BBox& b);
bool point_in_polygon(const Polygon& poly, double lat, double lon);

// Throws SaturationError when FarNeg cannot reach its count inside the
// attempt budget; NearNeg/YearlyNeg shortfalls are reported, not padded.
NegativeResult sample_negatives(const std::vector<LabeledSample>& positives,
                                const Polygon& region, const NegativeConfig& config);

/// Violations found by re-checking samples against the positives alone.
struct AuditReport {
  std::size_t checked = 0;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

AuditReport audit_negatives(const std::vector<LabeledSample>& samples,
                            const std::vector<LabeledSample>& positives,
                            const NegativeConfig& config);

void write_samples(std::ostream& out, const std::vector<LabeledSample>& samples);
std::vector<LabeledSample> read_samples(std::istream& in, std::vector<Diagnostic>& diags);

// ---- feature windows ----------------------------------------------------

inline constexpr std::array<std::string_view, 15> kWeatherVars = {
    "pr", "rmax", "rmin", "sph", "srad", "tmmn", "tmmx", "vs",
    "bi", "fm100", "fm1000", "erc", "etr", "pet", "vpd"};

using WeatherRow = std::array<double, 15>;

/// Daily gridded weather on a regular lat/lon grid (default 1/24 degree).
class WeatherTable {
public:
  explicit WeatherTable(double cells_per_degree = 24.0) : cells_per_degree_(cells_per_degree) {}

  void insert(double lat, double lon, Day day, const WeatherRow& row);
  const WeatherRow* find(double lat, double lon, Day day) const;
  bool has_cell(double lat, double lon) const;
  std::optional<Day> first_day() const { return first_; }
  std::optional<Day> last_day() const { return last_; }
  std::size_t size() const { return rows_.size(); }
  double cells_per_degree() const { return cells_per_degree_; }

private:
  using Key = std::tuple<std::int64_t, std::int64_t, Day>;
  std::pair<std::int64_t, std::int64_t> cell(double lat, double lon) const;

  double cells_per_degree_;
  std::map<Key, WeatherRow> rows_;
  std::map<std::pair<std::int64_t, std::int64_t>, std::size_t> cells_;
  std::optional<Day> first_;
  std::optional<Day> last_;
};

// CSV with latitude, longitude, datetime and the 15 variable columns in any order.
WeatherTable read_weather(std::istream& in, std::vector<Diagnostic>& diags,
                          double cells_per_degree = 24.0);

struct FeatureWindow {
  LabeledSample sample;
  Day first_day = 0;
  std::vector<WeatherRow> days;
  int filled_gaps = 0;
};

struct WindowConfig {
  int pre = 60;
  int post = 15; // days -pre .. post-1 inclusive
  int max_gaps = 3;
};

struct WindowResult {
  std::vector<FeatureWindow> windows;
  std::vector<Diagnostic> diagnostics; // row = 1-based sample index
};

WindowResult extract_windows(const std::vector<LabeledSample>& samples, const WeatherTable& table,
                             const WindowConfig& config = {});

// Shortest round-trip decimal; integral values keep a trailing ".0".
std::string format_number(double v);

// Dataset layout: latitude,longitude,datetime,Wildfire,<15 vars>, one row per day.
void write_windows(std::ostream& out, const std::vector<FeatureWindow>& windows);

} // namespace helitack::dataset
