#pragma once

#include "helitack/ca_engine.hpp"
#include "helitack/terrain.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace helitack {

struct DropRecord {
  int step = 0; // engine step at which the drop was applied, before advancing
  int row = 0;
  int col = 0;
  int extinguished = 0;
  friend bool operator==(const DropRecord&, const DropRecord&) = default;
};

/// Everything the report needs, recorded while an episode runs.
struct EpisodeLog {
  int width = 0;
  int height = 0;
  double cell_size_m = 0.0;
  int max_steps = 0;
  std::vector<Ignition> ignitions;
  std::optional<Forecast> forecast;
  std::string agent; // policy name, empty for external control

  std::vector<DropRecord> drops;
  std::vector<int> burnt_trajectory;   // burnt count after each step, [0] = after reset
  std::vector<int> burning_trajectory; // burning count, same indexing
  std::vector<std::uint8_t> actions;
  Outcome outcome;
  double reward_total = 0.0;
  std::vector<Phase> final_phase; // row-major, filled when the episode ends

  friend bool operator==(const EpisodeLog&, const EpisodeLog&) = default;
};

std::string_view to_string(Outcome::Kind kind);
std::optional<Outcome::Kind> parse_outcome_kind(std::string_view s);

// JSON with the final phase grid run-length encoded.
std::string serialize_log(const EpisodeLog& log);
EpisodeLog parse_log(std::string_view document);
EpisodeLog load_log_file(const std::filesystem::path& path);

} // namespace helitack
