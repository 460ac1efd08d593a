#include "helitack/report.hpp"

#include "helitack/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace helitack::report {

using nlohmann::json;

namespace {

constexpr double kEarthRadiusM = 6371000.0;

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

} // namespace

GeoRef cell_to_geo(const Forecast& anchor, int width, int height, double cell_size_m, int row,
                   int col) {
  const double north_m = (height / 2 - row) * cell_size_m;
  const double east_m = (col - width / 2) * cell_size_m;
  const double lat0 = anchor.lat * std::numbers::pi / 180.0;
  const double dlat = north_m / kEarthRadiusM * 180.0 / std::numbers::pi;
  const double dlon = east_m / (kEarthRadiusM * std::cos(lat0)) * 180.0 / std::numbers::pi;
  return {anchor.lat + dlat, anchor.lon + dlon};
}

std::vector<Zone> partition(int width, int height, int per_side) {
  std::vector<Zone> zones;
  for (int i = 0; i < per_side; ++i) {
    for (int j = 0; j < per_side; ++j) {
      zones.push_back({i * height / per_side, j * width / per_side, (i + 1) * height / per_side,
                       (j + 1) * width / per_side});
    }
  }
  return zones;
}

ThreatReport build_report(const EpisodeLog& log, const ReportConfig& config,
                          const std::optional<Forecast>& forecast) {
  if (log.outcome.kind == Outcome::Kind::Active) {
    throw ContractError("build_report: episode has not finished");
  }
  const std::size_t cells = static_cast<std::size_t>(log.width) * log.height;
  if (log.final_phase.size() != cells) {
    throw ContractError("build_report: final phase grid missing or mis-sized");
  }
  if (config.zones_per_side < 1 || config.zones_per_side > std::min(log.width, log.height)) {
    throw ValidationError("build_report: zones_per_side out of range");
  }

  ThreatReport r;
  r.width = log.width;
  r.height = log.height;
  r.cell_size_m = log.cell_size_m;
  const std::optional<Forecast> anchor = forecast ? forecast : log.forecast;
  if (anchor) r.forecast = ForecastInfo{anchor->lat, anchor->lon, anchor->datetime, anchor->confidence};

  for (const auto& d : log.drops) {
    DropEntry e{d.step, d.step * kStepMinutes, d.row, d.col, std::nullopt, d.extinguished};
    if (anchor) e.geo = cell_to_geo(*anchor, log.width, log.height, log.cell_size_m, d.row, d.col);
    r.suppression.drops.push_back(e);
  }
  r.suppression.helitack_count = static_cast<int>(log.drops.size());
  r.suppression.water_gal = r.suppression.helitack_count * config.gallons_per_drop;
  if (log.outcome.kind == Outcome::Kind::ContainedAt) r.suppression.containment_step = log.outcome.step;

  r.burn.trajectory = log.burnt_trajectory;
  r.burn.peak_burning = log.burning_trajectory.empty()
                            ? 0
                            : *std::max_element(log.burning_trajectory.begin(),
                                                log.burning_trajectory.end());
  r.burn.final_burnt = log.burnt_trajectory.empty() ? 0 : log.burnt_trajectory.back();
  r.burn.final_burnt_area_m2 = r.burn.final_burnt * log.cell_size_m * log.cell_size_m;

  // Spread heading: ignition centroid -> burnt centroid.
  double ig_r = 0.0, ig_c = 0.0;
  for (const auto& ig : log.ignitions) {
    ig_r += ig.row + 0.5;
    ig_c += ig.col + 0.5;
  }
  if (!log.ignitions.empty()) {
    ig_r /= log.ignitions.size();
    ig_c /= log.ignitions.size();
  }
  double b_r = 0.0, b_c = 0.0;
  std::size_t burnt = 0;
  for (std::size_t i = 0; i < cells; ++i) {
    if (log.final_phase[i] != Phase::Burnt) continue;
    b_r += static_cast<double>(i / log.width) + 0.5;
    b_c += static_cast<double>(i % log.width) + 0.5;
    ++burnt;
  }
  double head_r = 0.0, head_c = 0.0;
  if (burnt > 0 && !log.ignitions.empty()) {
    head_r = b_r / burnt - ig_r;
    head_c = b_c / burnt - ig_c;
  }
  const double head_len = std::hypot(head_r, head_c);

  struct Scored {
    std::size_t index;
    Advisory advisory;
  };
  std::vector<Scored> scored;
  const auto zones = partition(log.width, log.height, config.zones_per_side);
  for (std::size_t z = 0; z < zones.size(); ++z) {
    const Zone& zone = zones[z];
    int zone_burnt = 0;
    for (int row = zone.row0; row < zone.row1; ++row) {
      for (int col = zone.col0; col < zone.col1; ++col) {
        zone_burnt += log.final_phase[static_cast<std::size_t>(row) * log.width + col] == Phase::Burnt;
      }
    }
    const double area = static_cast<double>(zone.row1 - zone.row0) * (zone.col1 - zone.col0);
    const double density = zone_burnt / area;
    const double dir_r = (zone.row0 + zone.row1) / 2.0 - ig_r;
    const double dir_c = (zone.col0 + zone.col1) / 2.0 - ig_c;
    const double dir_len = std::hypot(dir_r, dir_c);
    double align = 0.0;
    if (head_len > 1e-9 && dir_len > 1e-9) {
      align = std::max(0.0, (head_r * dir_r + head_c * dir_c) / (head_len * dir_len));
    }
    Advisory a;
    a.zone = zone;
    a.burnt_density = density;
    a.alignment = align;
    a.priority = density + config.alignment_weight * align;
    a.rationale = fmt("%.0f%% of zone burnt", density * 100.0) +
                  fmt("; spread alignment toward zone %.2f", align);
    scored.push_back({z, a});
  }
  std::stable_sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
    return a.advisory.priority > b.advisory.priority;
  });
  const std::size_t keep = std::min<std::size_t>(scored.size(), std::max(0, config.top_zones));
  for (std::size_t i = 0; i < keep; ++i) r.advisories.push_back(scored[i].advisory);

  r.contingency.max_steps = log.max_steps;
  r.contingency.outcome = std::string(to_string(log.outcome.kind));
  r.contingency.final_burnt_fraction = static_cast<double>(r.burn.final_burnt) / cells;
  for (double f : config.contingency_fractions) {
    Threshold t{f, std::nullopt};
    for (std::size_t s = 0; s < log.burnt_trajectory.size(); ++s) {
      if (log.burnt_trajectory[s] >= f * cells) {
        t.reached_step = static_cast<int>(s);
        break;
      }
    }
    r.contingency.thresholds.push_back(t);
  }
  return r;
}

std::optional<Format> parse_format(std::string_view s) {
  if (s == "text") return Format::Text;
  if (s == "structured" || s == "json") return Format::Structured;
  return std::nullopt;
}

std::string render_report(const ThreatReport& r, Format format) {
  return format == Format::Text ? render_text(r) : render_structured(r);
}

std::string render_text(const ThreatReport& r) {
  std::string out;
  char line[256];
  auto add = [&out](const std::string& s) {
    out += s;
    out += '\n';
  };

  add("FIRE THREAT ASSESSMENT");
  std::snprintf(line, sizeof line, "Grid %d x %d cells at %g m", r.width, r.height, r.cell_size_m);
  add(line);
  add("");

  add("== Forecast ==");
  if (r.forecast) {
    std::snprintf(line, sizeof line, "Predicted ignition at %.6f, %.6f on %s (confidence %.2f)",
                  r.forecast->lat, r.forecast->lon, r.forecast->ignition_datetime.c_str(),
                  r.forecast->confidence);
    add(line);
  } else {
    add("No forecast anchor; positions are grid cells only.");
  }
  add("");

  add("== Suppression Timeline ==");
  std::snprintf(line, sizeof line, "Helitacks: %d", r.suppression.helitack_count);
  add(line);
  std::snprintf(line, sizeof line, "Water used: %.0f gal", r.suppression.water_gal);
  add(line);
  if (r.suppression.containment_step) {
    std::snprintf(line, sizeof line, "Contained at step %d (%.0f min)", *r.suppression.containment_step,
                  *r.suppression.containment_step * kStepMinutes);
  } else {
    std::snprintf(line, sizeof line, "Not contained within %d steps", r.contingency.max_steps);
  }
  add(line);
  for (const auto& d : r.suppression.drops) {
    if (d.geo) {
      std::snprintf(line, sizeof line, "  step %5d  t+%5.0f min  cell (%d, %d)  %.5f, %.5f  extinguished %d",
                    d.step, d.sim_time_min, d.row, d.col, d.geo->lat, d.geo->lon, d.extinguished);
    } else {
      std::snprintf(line, sizeof line, "  step %5d  t+%5.0f min  cell (%d, %d)  extinguished %d", d.step,
                    d.sim_time_min, d.row, d.col, d.extinguished);
    }
    add(line);
  }
  add("");

  add("== Burn Trajectory ==");
  std::snprintf(line, sizeof line, "Peak burning: %d cells", r.burn.peak_burning);
  add(line);
  std::snprintf(line, sizeof line, "Final burnt: %d cells (%.0f m^2)", r.burn.final_burnt,
                r.burn.final_burnt_area_m2);
  add(line);
  if (r.burn.trajectory.size() > 1) {
    const std::size_t last = r.burn.trajectory.size() - 1;
    for (int k = 1; k <= 10; ++k) {
      const std::size_t s = last * k / 10;
      std::snprintf(line, sizeof line, "  step %5zu  burnt %d", s, r.burn.trajectory[s]);
      add(line);
    }
  }
  add("");

  add("== Advisories ==");
  if (r.advisories.empty()) add("None.");
  for (std::size_t i = 0; i < r.advisories.size(); ++i) {
    const auto& a = r.advisories[i];
    std::snprintf(line, sizeof line, "%zu. rows %d-%d, cols %d-%d  priority %.3f  (%s)", i + 1,
                  a.zone.row0, a.zone.row1 - 1, a.zone.col0, a.zone.col1 - 1, a.priority,
                  a.rationale.c_str());
    add(line);
  }
  add("");

  add("== Contingency ==");
  std::snprintf(line, sizeof line, "Outcome: %s; final burnt fraction %.4f", r.contingency.outcome.c_str(),
                r.contingency.final_burnt_fraction);
  add(line);
  for (const auto& t : r.contingency.thresholds) {
    if (t.reached_step) {
      std::snprintf(line, sizeof line, "  %.0f%% burnt reached at step %d", t.burnt_fraction * 100.0,
                    *t.reached_step);
    } else {
      std::snprintf(line, sizeof line, "  %.0f%% burnt not reached", t.burnt_fraction * 100.0);
    }
    add(line);
  }
  return out;
}

namespace {

json to_json(const ThreatReport& r) {
  json doc;
  doc["schema_version"] = r.schema_version;
  doc["grid"] = {{"width", r.width}, {"height", r.height}, {"cell_size_m", r.cell_size_m}};
  if (r.forecast) {
    doc["forecast"] = {{"lat", r.forecast->lat},
                       {"lon", r.forecast->lon},
                       {"ignition_datetime", r.forecast->ignition_datetime},
                       {"confidence", r.forecast->confidence}};
  } else {
    doc["forecast"] = nullptr;
  }
  json drops = json::array();
  for (const auto& d : r.suppression.drops) {
    json e = {{"step", d.step}, {"sim_time_min", d.sim_time_min}, {"row", d.row},
              {"col", d.col},   {"extinguished", d.extinguished}};
    e["geo"] = d.geo ? json{{"lat", d.geo->lat}, {"lon", d.geo->lon}} : json(nullptr);
    drops.push_back(e);
  }
  doc["suppression"] = {{"drops", drops},
                        {"helitack_count", r.suppression.helitack_count},
                        {"water_gal", r.suppression.water_gal},
                        {"containment_step", r.suppression.containment_step
                                                 ? json(*r.suppression.containment_step)
                                                 : json(nullptr)}};
  doc["burn"] = {{"trajectory", r.burn.trajectory},
                 {"peak_burning", r.burn.peak_burning},
                 {"final_burnt", r.burn.final_burnt},
                 {"final_burnt_area_m2", r.burn.final_burnt_area_m2}};
  json adv = json::array();
  for (const auto& a : r.advisories) {
    adv.push_back({{"zone", {a.zone.row0, a.zone.col0, a.zone.row1, a.zone.col1}},
                   {"priority", a.priority},
                   {"burnt_density", a.burnt_density},
                   {"alignment", a.alignment},
                   {"rationale", a.rationale}});
  }
  doc["advisories"] = adv;
  json th = json::array();
  for (const auto& t : r.contingency.thresholds) {
    th.push_back({{"burnt_fraction", t.burnt_fraction},
                  {"reached_step", t.reached_step ? json(*t.reached_step) : json(nullptr)}});
  }
  doc["contingency"] = {{"max_steps", r.contingency.max_steps},
                        {"outcome", r.contingency.outcome},
                        {"final_burnt_fraction", r.contingency.final_burnt_fraction},
                        {"thresholds", th}};
  return doc;
}

template <typename T>
std::optional<T> opt(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<T>();
}

} // namespace

std::string render_structured(const ThreatReport& r) { return to_json(r).dump(2) + "\n"; }

ThreatReport parse_structured(std::string_view document) {
  ThreatReport r;
  try {
    const json doc = json::parse(document);
    r.schema_version = doc.at("schema_version").get<int>();
    if (r.schema_version != kSchemaVersion) {
      throw ParseError("report: unsupported schema_version " + std::to_string(r.schema_version));
    }
    r.width = doc.at("grid").at("width").get<int>();
    r.height = doc.at("grid").at("height").get<int>();
    r.cell_size_m = doc.at("grid").at("cell_size_m").get<double>();
    if (const auto& f = doc.at("forecast"); !f.is_null()) {
      r.forecast = ForecastInfo{f.at("lat").get<double>(), f.at("lon").get<double>(),
                                f.at("ignition_datetime").get<std::string>(),
                                f.at("confidence").get<double>()};
    }
    const json& s = doc.at("suppression");
    for (const auto& d : s.at("drops")) {
      DropEntry e{d.at("step").get<int>(), d.at("sim_time_min").get<double>(),
                  d.at("row").get<int>(), d.at("col").get<int>(), std::nullopt,
                  d.at("extinguished").get<int>()};
      if (!d.at("geo").is_null()) {
        e.geo = GeoRef{d["geo"].at("lat").get<double>(), d["geo"].at("lon").get<double>()};
      }
      r.suppression.drops.push_back(e);
    }
    r.suppression.helitack_count = s.at("helitack_count").get<int>();
    r.suppression.water_gal = s.at("water_gal").get<double>();
    r.suppression.containment_step = opt<int>(s.at("containment_step"));
    const json& b = doc.at("burn");
    r.burn.trajectory = b.at("trajectory").get<std::vector<int>>();
    r.burn.peak_burning = b.at("peak_burning").get<int>();
    r.burn.final_burnt = b.at("final_burnt").get<int>();
    r.burn.final_burnt_area_m2 = b.at("final_burnt_area_m2").get<double>();
    for (const auto& a : doc.at("advisories")) {
      const auto z = a.at("zone").get<std::vector<int>>();
      if (z.size() != 4) throw ParseError("report: zone needs 4 integers");
      r.advisories.push_back({{z[0], z[1], z[2], z[3]},
                              a.at("priority").get<double>(),
                              a.at("burnt_density").get<double>(),
                              a.at("alignment").get<double>(),
                              a.at("rationale").get<std::string>()});
    }
    const json& c = doc.at("contingency");
    r.contingency.max_steps = c.at("max_steps").get<int>();
    r.contingency.outcome = c.at("outcome").get<std::string>();
    r.contingency.final_burnt_fraction = c.at("final_burnt_fraction").get<double>();
    for (const auto& t : c.at("thresholds")) {
      r.contingency.thresholds.push_back(
          {t.at("burnt_fraction").get<double>(), opt<int>(t.at("reached_step"))});
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("report: ") + e.what());
  }
  return r;
}

} // namespace helitack::report
