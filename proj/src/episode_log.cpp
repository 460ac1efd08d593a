#include "helitack/episode_log.hpp"

#include "helitack/error.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace helitack {

using nlohmann::json;

std::string_view to_string(Outcome::Kind kind) {
  switch (kind) {
  case Outcome::Kind::Active: return "active";
  case Outcome::Kind::ContainedAt: return "contained";
  case Outcome::Kind::MaxStepsReached: return "max_steps";
  }
  return "?";
}

std::optional<Outcome::Kind> parse_outcome_kind(std::string_view s) {
  if (s == "active") return Outcome::Kind::Active;
  if (s == "contained") return Outcome::Kind::ContainedAt;
  if (s == "max_steps") return Outcome::Kind::MaxStepsReached;
  return std::nullopt;
}

namespace {

json rle(const std::vector<Phase>& cells) {
  json out = json::array();
  std::size_t i = 0;
  while (i < cells.size()) {
    std::size_t j = i;
    while (j < cells.size() && cells[j] == cells[i]) ++j;
    out.push_back(static_cast<int>(cells[i]));
    out.push_back(j - i);
    i = j;
  }
  return out;
}

std::vector<Phase> unrle(const json& runs) {
  if (!runs.is_array() || runs.size() % 2 != 0) throw ParseError("log: final_phase must be pairs");
  std::vector<Phase> out;
  for (std::size_t i = 0; i < runs.size(); i += 2) {
    const int code = runs[i].get<int>();
    if (code < 0 || code > 3) throw ParseError("log: bad phase code " + std::to_string(code));
    out.insert(out.end(), runs[i + 1].get<std::size_t>(), static_cast<Phase>(code));
  }
  return out;
}

} // namespace

std::string serialize_log(const EpisodeLog& log) {
  json ignitions = json::array();
  for (const auto& ig : log.ignitions) ignitions.push_back({ig.row, ig.col, ig.step});
  json grid = {{"width", log.width},         {"height", log.height},
               {"cell_size_m", log.cell_size_m}, {"max_steps", log.max_steps},
               {"ignitions", ignitions}};
  if (log.forecast) {
    grid["forecast"] = {{"lat", log.forecast->lat},
                        {"lon", log.forecast->lon},
                        {"datetime", log.forecast->datetime},
                        {"confidence", log.forecast->confidence}};
  }
  json drops = json::array();
  for (const auto& d : log.drops) {
    drops.push_back({{"step", d.step}, {"row", d.row}, {"col", d.col},
                     {"extinguished", d.extinguished}});
  }
  json doc = {{"log_version", 1},
              {"grid", grid},
              {"agent", log.agent},
              {"drops", drops},
              {"burnt_trajectory", log.burnt_trajectory},
              {"burning_trajectory", log.burning_trajectory},
              {"actions", log.actions},
              {"outcome", {{"kind", to_string(log.outcome.kind)}, {"step", log.outcome.step}}},
              {"reward_total", log.reward_total},
              {"final_phase", rle(log.final_phase)}};
  return doc.dump();
}

EpisodeLog parse_log(std::string_view document) {
  EpisodeLog log;
  try {
    const json doc = json::parse(document);
    const json& grid = doc.at("grid");
    log.width = grid.at("width").get<int>();
    log.height = grid.at("height").get<int>();
    log.cell_size_m = grid.at("cell_size_m").get<double>();
    log.max_steps = grid.at("max_steps").get<int>();
    for (const auto& ig : grid.at("ignitions")) {
      log.ignitions.push_back({ig.at(0).get<int>(), ig.at(1).get<int>(), ig.at(2).get<int>()});
    }
    if (grid.contains("forecast")) {
      const json& f = grid["forecast"];
      log.forecast = Forecast{f.at("lat").get<double>(), f.at("lon").get<double>(),
                              f.at("datetime").get<std::string>(),
                              f.at("confidence").get<double>()};
    }
    log.agent = doc.at("agent").get<std::string>();
    for (const auto& d : doc.at("drops")) {
      log.drops.push_back({d.at("step").get<int>(), d.at("row").get<int>(), d.at("col").get<int>(),
                           d.at("extinguished").get<int>()});
    }
    log.burnt_trajectory = doc.at("burnt_trajectory").get<std::vector<int>>();
    log.burning_trajectory = doc.at("burning_trajectory").get<std::vector<int>>();
    log.actions = doc.at("actions").get<std::vector<std::uint8_t>>();
    const auto kind = parse_outcome_kind(doc.at("outcome").at("kind").get<std::string>());
    if (!kind) throw ParseError("log: unknown outcome kind");
    log.outcome = {*kind, doc.at("outcome").at("step").get<int>()};
    log.reward_total = doc.at("reward_total").get<double>();
    log.final_phase = unrle(doc.at("final_phase"));
  } catch (const json::exception& e) {
    throw ParseError(std::string("log: ") + e.what());
  }
  if (!log.final_phase.empty() &&
      log.final_phase.size() != static_cast<std::size_t>(log.width) * log.height) {
    throw ParseError("log: final_phase size does not match grid");
  }
  return log;
}

EpisodeLog load_log_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_log(ss.str());
}

} // namespace helitack
