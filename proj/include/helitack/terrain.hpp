#pragma once

#include "helitack/fuel.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace helitack {

/// Grid coordinate. Row 0 is the north edge; storage is row-major.
struct Cell {
  int row = 0;
  int col = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
};

struct GeoRef {
  double lat = 0.0;
  double lon = 0.0;
  friend bool operator==(const GeoRef&, const GeoRef&) = default;
};

// Throws ValidationError when lat/lon fall outside [-90, 90] x [-180, 180].
void validate(const GeoRef& g);

struct Ignition {
  int row = 0;
  int col = 0;
  int step = 0;
  friend bool operator==(const Ignition&, const Ignition&) = default;
};

struct Forecast {
  double lat = 0.0;
  double lon = 0.0;
  std::string datetime;
  double confidence = 0.0;
  friend bool operator==(const Forecast&, const Forecast&) = default;
};

inline constexpr int kDefaultWidth = 240;
inline constexpr int kDefaultHeight = 160;
inline constexpr double kDefaultCellSizeM = 30.0;
inline constexpr double kFeetPerMeter = 1.0 / 0.3048;

struct Scenario {
  int width = kDefaultWidth;
  int height = kDefaultHeight;
  double cell_size_m = kDefaultCellSizeM;
  std::vector<double> elevation; // meters, row-major
  std::vector<int> fuel_code;    // row-major
  double wind_speed_ms = 0.0;
  double wind_dir_deg = 0.0; // compass bearing the wind blows toward
  double moisture = 0.05;
  std::vector<Ignition> ignitions;
  std::uint64_t seed = 0;
  int max_steps = 1000;
  std::optional<Forecast> forecast;

  std::size_t cell_count() const { return static_cast<std::size_t>(width) * height; }
  std::size_t index(Cell c) const { return static_cast<std::size_t>(c.row) * width + c.col; }
  Cell cell_at(std::size_t i) const {
    return {static_cast<int>(i / width), static_cast<int>(i % width)};
  }
  bool in_bounds(Cell c) const { return c.row >= 0 && c.row < height && c.col >= 0 && c.col < width; }

  // Wind direction in kernel convention (radians, 0 = east, CCW).
  double wind_dir_rad() const;
  double wind_speed_ft_min() const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

// Checks array sizes, fuel codes, ignition bounds and scalar ranges.
// Throws ValidationError naming the field (and index where relevant).
void validate(const Scenario& s, const FuelCatalog& catalog);

inline constexpr int kScenarioMajorVersion = 1;

// `base_dir` resolves a relative sidecar blob path.
Scenario load_scenario(std::string_view document, const FuelCatalog& catalog,
                       const std::filesystem::path& base_dir = {});
Scenario load_scenario_file(const std::filesystem::path& path, const FuelCatalog& catalog);

// Inline arrays unless `blob_path` is given, in which case elevation and fuel
// codes go to that binary sidecar and the document references it by path
// (relative to `base_dir`) and MD5 content hash.
std::string serialize_scenario(const Scenario& s);
std::string serialize_scenario(const Scenario& s, const std::filesystem::path& base_dir,
                               const std::filesystem::path& blob_path);

enum class SyntheticKind { FlatUniform, SingleSlope, Ridge, TwoFuel };

std::optional<SyntheticKind> parse_synthetic_kind(std::string_view name);
std::string_view to_string(SyntheticKind kind);

// Deterministic fixture for (kind, width, height, seed); width, height >= 8.
Scenario synthetic_scenario(SyntheticKind kind, int width, int height, std::uint64_t seed);

// Rise over horizontal run between 8-adjacent cells; DomainError otherwise.
double slope_between(const Scenario& s, Cell from, Cell to);

} // namespace helitack
