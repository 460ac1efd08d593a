#include "helitack/dataset.hpp"

#include "helitack/error.hpp"
#include "helitack/rng.hpp"
#include "helitack/simd/kernels.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <unordered_map>

namespace helitack::dataset {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr std::int64_t kSecondsPerDay = 86400;

double floor_div(double a, double b) { return std::floor(a / b); }

// ---- CSV helpers ----

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      return out;
    }
    out.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

std::optional<double> parse_double(std::string_view s) {
  double v = 0.0;
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

template <typename Int>
std::optional<Int> parse_int(std::string_view s) {
  Int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

struct Header {
  std::vector<std::string> names;
  std::optional<std::size_t> find(std::initializer_list<std::string_view> aliases) const {
    for (std::size_t i = 0; i < names.size(); ++i) {
      for (auto a : aliases) {
        if (names[i] == a) return i;
      }
    }
    return std::nullopt;
  }
};

Header read_header(std::istream& in, const char* what) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(std::string(what) + ": empty input");
  Header h;
  for (auto f : split(line)) h.names.emplace_back(f);
  return h;
}

std::size_t require(const Header& h, std::initializer_list<std::string_view> aliases,
                    const char* what) {
  auto i = h.find(aliases);
  if (!i) throw ParseError(std::string(what) + ": missing column '" + std::string(*aliases.begin()) + "'");
  return *i;
}

// ---- spatial buckets ----

// Cell sizes guaranteeing that any two points closer than `km` fall in the
// same or adjacent buckets, for latitudes up to |lat_max|.
struct BucketGrid {
  double dlat;
  double dlon;

  BucketGrid(double km, double lat_abs_max) {
    const double ang = km / kEarthRadiusKm;
    dlat = ang / kDegToRad * 1.01;
    const double phi = std::min(90.0, lat_abs_max + dlat) * kDegToRad;
    const double c = std::cos(phi);
    const double s = c > 1e-6 ? std::sin(ang / 2.0) / c : 2.0;
    dlon = s >= 1.0 ? 360.0 : 2.0 * std::asin(s) / kDegToRad * 1.01;
  }

  std::pair<std::int64_t, std::int64_t> cell(double lat, double lon) const {
    return {static_cast<std::int64_t>(floor_div(lat, dlat)),
            static_cast<std::int64_t>(floor_div(lon, dlon))};
  }
  static std::uint64_t key(std::int64_t a, std::int64_t b) {
    return (static_cast<std::uint64_t>(a) << 32) ^ (static_cast<std::uint64_t>(b) & 0xffffffffULL);
  }
};

std::array<double, 3> unit_vector(double lat, double lon) {
  const double p = lat * kDegToRad;
  const double l = lon * kDegToRad;
  return {std::cos(p) * std::cos(l), std::cos(p) * std::sin(l), std::sin(p)};
}

// Positives grouped by day for the 5 km / +-1 day conflict test.
class ConflictIndex {
public:
  explicit ConflictIndex(const std::vector<LabeledSample>& positives) : positives_(positives) {
    for (std::size_t i = 0; i < positives.size(); ++i) by_day_[positives[i].date].push_back(i);
  }

  bool conflicts(double lat, double lon, Day day, double km, int days) const {
    for (Day d = day - days; d <= day + days; ++d) {
      auto it = by_day_.find(d);
      if (it == by_day_.end()) continue;
      for (std::size_t i : it->second) {
        if (haversine_km({lat, lon}, {positives_[i].lat, positives_[i].lon}) < km) return true;
      }
    }
    return false;
  }

private:
  const std::vector<LabeledSample>& positives_;
  std::unordered_map<Day, std::vector<std::size_t>> by_day_;
};

double wrap_lon(double lon) {
  while (lon > 180.0) lon -= 360.0;
  while (lon < -180.0) lon += 360.0;
  return lon;
}

} // namespace

double haversine_km(const GeoRef& a, const GeoRef& b) {
  const double p1 = a.lat * kDegToRad;
  const double p2 = b.lat * kDegToRad;
  const double dp = p2 - p1;
  const double dl = (b.lon - a.lon) * kDegToRad;
  const double s1 = std::sin(dp / 2.0);
  const double s2 = std::sin(dl / 2.0);
  const double h = s1 * s1 + std::cos(p1) * std::cos(p2) * s2 * s2;
  return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(h)));
}

GeoRef destination(const GeoRef& from, double bearing_rad, double distance_km) {
  const double d = distance_km / kEarthRadiusKm;
  const double p1 = from.lat * kDegToRad;
  const double l1 = from.lon * kDegToRad;
  const double p2 =
      std::asin(std::sin(p1) * std::cos(d) + std::cos(p1) * std::sin(d) * std::cos(bearing_rad));
  const double l2 = l1 + std::atan2(std::sin(bearing_rad) * std::sin(d) * std::cos(p1),
                                    std::cos(d) - std::sin(p1) * std::sin(p2));
  return {p2 / kDegToRad, wrap_lon(l2 / kDegToRad)};
}

// ---- time ----

std::optional<Day> parse_date(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  const auto y = parse_int<int>(s.substr(0, 4));
  const auto m = parse_int<unsigned>(s.substr(5, 2));
  const auto d = parse_int<unsigned>(s.substr(8, 2));
  if (!y || !m || !d) return std::nullopt;
  const std::chrono::year_month_day ymd{std::chrono::year{*y}, std::chrono::month{*m},
                                        std::chrono::day{*d}};
  if (!ymd.ok()) return std::nullopt;
  return std::chrono::sys_days(ymd).time_since_epoch().count();
}

std::string format_date(Day d) {
  const std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{d}}};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

std::optional<std::int64_t> parse_timestamp(std::string_view s) {
  if (s.size() < 10) return std::nullopt;
  const auto day = parse_date(s.substr(0, 10));
  if (!day) return std::nullopt;
  std::int64_t secs = *day * kSecondsPerDay;
  std::string_view rest = s.substr(10);
  if (rest.empty()) return secs;
  if (rest.front() != 'T' && rest.front() != ' ') return std::nullopt;
  rest.remove_prefix(1);
  if (!rest.empty() && rest.back() == 'Z') rest.remove_suffix(1);
  if (rest.size() >= 6 && rest.substr(rest.size() - 6) == "+00:00") rest.remove_suffix(6);
  if (rest.size() != 5 && rest.size() != 8) return std::nullopt;
  if (rest[2] != ':' || (rest.size() == 8 && rest[5] != ':')) return std::nullopt;
  const auto hh = parse_int<int>(rest.substr(0, 2));
  const auto mm = parse_int<int>(rest.substr(3, 2));
  const auto ss = rest.size() == 8 ? parse_int<int>(rest.substr(6, 2)) : std::optional<int>(0);
  if (!hh || !mm || !ss || *hh > 23 || *mm > 59 || *ss > 60) return std::nullopt;
  return secs + *hh * 3600 + *mm * 60 + *ss;
}

Day day_of(std::int64_t seconds) {
  Day d = seconds / kSecondsPerDay;
  if (seconds % kSecondsPerDay < 0) --d;
  return d;
}

std::string to_json_line(const Diagnostic& d) {
  std::string out = "{\"row\":" + std::to_string(d.row) + ",\"reason\":\"";
  for (char c : d.reason) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"}";
}

// ---- incidents ----

std::vector<IncidentRecord> read_incidents(std::istream& in, std::vector<Diagnostic>& diags) {
  const Header h = read_header(in, "incidents");
  const auto lat_i = require(h, {"latitude", "lat"}, "incidents");
  const auto lon_i = require(h, {"longitude", "lon"}, "incidents");
  const auto t_i = require(h, {"discovered_at", "datetime"}, "incidents");

  std::vector<IncidentRecord> out;
  std::string line;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto f = split(line);
    if (f.size() != h.names.size()) {
      diags.push_back({row, "expected " + std::to_string(h.names.size()) + " fields, got " +
                                std::to_string(f.size())});
      continue;
    }
    const auto lat = parse_double(f[lat_i]);
    const auto lon = parse_double(f[lon_i]);
    const auto t = parse_timestamp(f[t_i]);
    if (!lat || !lon || *lat < -90 || *lat > 90 || *lon < -180 || *lon > 180) {
      diags.push_back({row, "bad coordinates"});
      continue;
    }
    if (!t) {
      diags.push_back({row, "bad timestamp '" + std::string(f[t_i]) + "'"});
      continue;
    }
    out.push_back({*lat, *lon, *t});
  }
  return out;
}

void write_incidents(std::ostream& out, const std::vector<IncidentRecord>& records) {
  out << "latitude,longitude,discovered_at\n";
  for (const auto& r : records) {
    const std::int64_t tod = r.discovered_at - day_of(r.discovered_at) * kSecondsPerDay;
    char hms[16];
    std::snprintf(hms, sizeof hms, "T%02d:%02d:%02dZ", static_cast<int>(tod / 3600),
                  static_cast<int>(tod / 60 % 60), static_cast<int>(tod % 60));
    out << format_number(r.lat) << ',' << format_number(r.lon) << ','
        << format_date(day_of(r.discovered_at)) << hms << '\n';
  }
}

std::vector<IncidentRecord> dedup_incidents(std::vector<IncidentRecord> records,
                                            const DedupConfig& config) {
  std::stable_sort(records.begin(), records.end(),
                   [](const IncidentRecord& a, const IncidentRecord& b) {
                     return a.discovered_at < b.discovered_at;
                   });
  const double lat_abs = std::max(std::abs(config.bbox.lat_min), std::abs(config.bbox.lat_max));
  const BucketGrid grid(config.min_km, lat_abs);
  const auto min_gap = static_cast<std::int64_t>(std::ceil(config.min_hours * 3600.0));

  std::vector<IncidentRecord> kept;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> buckets;
  for (const auto& r : records) {
    if (!config.bbox.contains(r.lat, r.lon)) continue;
    const auto [a, b] = grid.cell(r.lat, r.lon);
    const Day day = day_of(r.discovered_at);
    bool keep = true;
    for (std::int64_t da = -1; da <= 1 && keep; ++da) {
      for (std::int64_t db = -1; db <= 1 && keep; ++db) {
        auto it = buckets.find(BucketGrid::key(a + da, b + db));
        if (it == buckets.end()) continue;
        for (std::uint32_t k : it->second) {
          const auto& o = kept[k];
          if (haversine_km({r.lat, r.lon}, {o.lat, o.lon}) >= config.min_km) continue;
          if (day_of(o.discovered_at) == day || r.discovered_at - o.discovered_at < min_gap) {
            keep = false;
            break;
          }
        }
      }
    }
    if (!keep) continue;
    buckets[BucketGrid::key(a, b)].push_back(static_cast<std::uint32_t>(kept.size()));
    kept.push_back(r);
  }
  return kept;
}

// ---- negatives ----

std::string_view to_string(Tier t) {
  switch (t) {
  case Tier::Positive: return "positive";
  case Tier::FarNeg: return "far";
  case Tier::NearNeg: return "near";
  case Tier::YearlyNeg: return "yearly";
  }
  return "?";
}

std::optional<Tier> parse_tier(std::string_view s) {
  if (s == "positive") return Tier::Positive;
  if (s == "far") return Tier::FarNeg;
  if (s == "near") return Tier::NearNeg;
  if (s == "yearly") return Tier::YearlyNeg;
  return std::nullopt;
}

std::vector<LabeledSample> as_positives(const std::vector<IncidentRecord>& records) {
  std::vector<LabeledSample> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    out.push_back({r.lat, r.lon, day_of(r.discovered_at), Label::Wildfire, Tier::Positive, -1});
  }
  return out;
}

Polygon bbox_polygon(const BBox& b) {
  return {{b.lat_min, b.lon_min}, {b.lat_min, b.lon_max}, {b.lat_max, b.lon_max}, {b.lat_max, b.lon_min}};
}

bool point_in_polygon(const Polygon& poly, double lat, double lon) {
  bool inside = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const double yi = poly[i].lat, xi = poly[i].lon;
    const double yj = poly[j].lat, xj = poly[j].lon;
    if ((yi > lat) != (yj > lat) && lon < (xj - xi) * (lat - yi) / (yj - yi) + xi) inside = !inside;
  }
  return inside;
}

NegativeResult sample_negatives(const std::vector<LabeledSample>& positives, const Polygon& region,
                                const NegativeConfig& config) {
  if (positives.empty()) throw ValidationError("sample_negatives: no positives");
  if (region.size() < 3) throw ValidationError("sample_negatives: region needs >= 3 vertices");
  if (config.near_min_days > config.near_max_days || config.near_min_days < 0) {
    throw ValidationError("sample_negatives: bad near-negative day range");
  }

  Rng rng(config.seed);
  NegativeResult result;
  const ConflictIndex conflicts(positives);

  Day first = positives.front().date;
  Day last = first;
  std::vector<double> xs, ys, zs;
  xs.reserve(positives.size());
  ys.reserve(positives.size());
  zs.reserve(positives.size());
  for (const auto& p : positives) {
    first = std::min(first, p.date);
    last = std::max(last, p.date);
    const auto u = unit_vector(p.lat, p.lon);
    xs.push_back(u[0]);
    ys.push_back(u[1]);
    zs.push_back(u[2]);
  }

  // Far: chord distance on the unit sphere, with a small margin so the
  // haversine audit never disagrees by rounding.
  {
    double lat_lo = 90, lat_hi = -90, lon_lo = 180, lon_hi = -180;
    for (const auto& v : region) {
      lat_lo = std::min(lat_lo, v.lat);
      lat_hi = std::max(lat_hi, v.lat);
      lon_lo = std::min(lon_lo, v.lon);
      lon_hi = std::max(lon_hi, v.lon);
    }
    const double half = std::sin(config.far_min_km / kEarthRadiusKm / 2.0);
    const double min_chord2 = 4.0 * half * half * (1.0 + 1e-9);
    const auto& k = simd::kernels();
    const std::size_t budget = std::max<std::size_t>(1000, config.attempts_per_sample * config.counts.far);
    std::size_t attempts = 0;
    while (result.achieved.far < config.counts.far) {
      if (attempts++ >= budget) {
        throw SaturationError("far negatives: region saturated after " + std::to_string(budget) +
                                  " attempts (" + std::to_string(result.achieved.far) + " of " +
                                  std::to_string(config.counts.far) + ")",
                              result.achieved.far);
      }
      const double lat = rng.uniform(lat_lo, lat_hi);
      const double lon = rng.uniform(lon_lo, lon_hi);
      const Day day = first + static_cast<Day>(rng.below(static_cast<std::uint64_t>(last - first + 1)));
      if (!point_in_polygon(region, lat, lon)) continue;
      const auto u = unit_vector(lat, lon);
      if (k.min_dist2(xs.data(), ys.data(), zs.data(), xs.size(), u[0], u[1], u[2]) < min_chord2) {
        continue;
      }
      result.samples.push_back({lat, lon, day, Label::NoWildfire, Tier::FarNeg, -1});
      ++result.achieved.far;
    }
  }

  // Near: jittered location, shifted date, no real fire nearby.
  {
    const std::size_t budget = config.attempts_per_sample * config.counts.near;
    std::size_t attempts = 0;
    while (result.achieved.near < config.counts.near && attempts++ < budget) {
      const std::size_t src = static_cast<std::size_t>(rng.below(positives.size()));
      const double bearing = rng.uniform(0.0, 2.0 * std::numbers::pi);
      const double dist = config.near_max_jitter_km * std::sqrt(rng.uniform());
      const GeoRef p = destination({positives[src].lat, positives[src].lon}, bearing, dist);
      const int shift = static_cast<int>(rng.between(config.near_min_days, config.near_max_days));
      const Day day = positives[src].date + (rng.coin() ? shift : -shift);
      if (conflicts.conflicts(p.lat, p.lon, day, config.conflict_km, config.conflict_days)) continue;
      result.samples.push_back({p.lat, p.lon, day, Label::NoWildfire, Tier::NearNeg,
                                static_cast<std::int64_t>(src)});
      ++result.achieved.near;
    }
  }

  // Yearly: each positive at most once, one year earlier.
  {
    std::vector<std::size_t> order(positives.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[static_cast<std::size_t>(rng.below(i))]);
    }
    for (std::size_t i = 0; i < order.size() && result.achieved.yearly < config.counts.yearly; ++i) {
      const auto& p = positives[order[i]];
      const Day day = p.date - config.yearly_days;
      if (conflicts.conflicts(p.lat, p.lon, day, config.conflict_km, config.conflict_days)) continue;
      result.samples.push_back({p.lat, p.lon, day, Label::NoWildfire, Tier::YearlyNeg,
                                static_cast<std::int64_t>(order[i])});
      ++result.achieved.yearly;
    }
  }

  result.shortfall = {config.counts.far - result.achieved.far,
                      config.counts.near - result.achieved.near,
                      config.counts.yearly - result.achieved.yearly};
  return result;
}

AuditReport audit_negatives(const std::vector<LabeledSample>& samples,
                            const std::vector<LabeledSample>& positives,
                            const NegativeConfig& config) {
  AuditReport report;
  auto fail = [&](std::size_t i, const std::string& why) {
    report.violations.push_back("sample " + std::to_string(i) + ": " + why);
  };
  auto conflict = [&](const LabeledSample& s) {
    for (const auto& p : positives) {
      const Day dd = s.date > p.date ? s.date - p.date : p.date - s.date;
      if (dd <= config.conflict_days && haversine_km({s.lat, s.lon}, {p.lat, p.lon}) < config.conflict_km) {
        return true;
      }
    }
    return false;
  };
  std::vector<char> yearly_used(positives.size(), 0);

  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    ++report.checked;
    if (s.label != Label::NoWildfire) fail(i, "negative labelled Wildfire");
    const bool has_source = s.source >= 0 && static_cast<std::size_t>(s.source) < positives.size();
    switch (s.tier) {
    case Tier::Positive:
      fail(i, "positive in negative set");
      break;
    case Tier::FarNeg:
      for (const auto& p : positives) {
        if (haversine_km({s.lat, s.lon}, {p.lat, p.lon}) < config.far_min_km) {
          fail(i, "far negative within " + std::to_string(config.far_min_km) + " km of a positive");
          break;
        }
      }
      break;
    case Tier::NearNeg: {
      if (!has_source) {
        fail(i, "near negative without source");
        break;
      }
      const auto& p = positives[static_cast<std::size_t>(s.source)];
      const Day off = s.date > p.date ? s.date - p.date : p.date - s.date;
      if (off < config.near_min_days || off > config.near_max_days) fail(i, "near offset out of range");
      if (haversine_km({s.lat, s.lon}, {p.lat, p.lon}) > config.near_max_jitter_km + 1e-6) {
        fail(i, "near jitter beyond limit");
      }
      if (conflict(s)) fail(i, "near negative collides with a positive");
      break;
    }
    case Tier::YearlyNeg: {
      if (!has_source) {
        fail(i, "yearly negative without source");
        break;
      }
      const auto src = static_cast<std::size_t>(s.source);
      const auto& p = positives[src];
      if (s.lat != p.lat || s.lon != p.lon) fail(i, "yearly negative moved");
      if (s.date != p.date - config.yearly_days) fail(i, "yearly offset is not one year");
      if (yearly_used[src]++) fail(i, "yearly source reused");
      if (conflict(s)) fail(i, "yearly negative collides with a positive");
      break;
    }
    }
  }
  return report;
}

void write_samples(std::ostream& out, const std::vector<LabeledSample>& samples) {
  out << "latitude,longitude,datetime,Wildfire,tier,source\n";
  for (const auto& s : samples) {
    out << format_number(s.lat) << ',' << format_number(s.lon) << ',' << format_date(s.date) << ','
        << (s.label == Label::Wildfire ? "Yes" : "No") << ',' << to_string(s.tier) << ','
        << s.source << '\n';
  }
}

std::vector<LabeledSample> read_samples(std::istream& in, std::vector<Diagnostic>& diags) {
  const Header h = read_header(in, "samples");
  const auto lat_i = require(h, {"latitude", "lat"}, "samples");
  const auto lon_i = require(h, {"longitude", "lon"}, "samples");
  const auto d_i = require(h, {"datetime", "date"}, "samples");
  const auto w_i = h.find({"Wildfire", "wildfire"});
  const auto t_i = h.find({"tier"});
  const auto s_i = h.find({"source"});

  std::vector<LabeledSample> out;
  std::string line;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto f = split(line);
    if (f.size() != h.names.size()) {
      diags.push_back({row, "field count mismatch"});
      continue;
    }
    LabeledSample s;
    const auto lat = parse_double(f[lat_i]);
    const auto lon = parse_double(f[lon_i]);
    const auto d = parse_date(f[d_i].substr(0, std::min<std::size_t>(10, f[d_i].size())));
    if (!lat || !lon || !d) {
      diags.push_back({row, "bad latitude/longitude/datetime"});
      continue;
    }
    s.lat = *lat;
    s.lon = *lon;
    s.date = *d;
    s.label = Label::Wildfire;
    if (w_i) {
      if (f[*w_i] == "Yes") s.label = Label::Wildfire;
      else if (f[*w_i] == "No") s.label = Label::NoWildfire;
      else {
        diags.push_back({row, "Wildfire must be Yes or No"});
        continue;
      }
    }
    s.tier = s.label == Label::Wildfire ? Tier::Positive : Tier::FarNeg;
    if (t_i) {
      const auto t = parse_tier(f[*t_i]);
      if (!t) {
        diags.push_back({row, "unknown tier"});
        continue;
      }
      s.tier = *t;
    }
    if (s_i) {
      const auto src = parse_int<std::int64_t>(f[*s_i]);
      if (!src) {
        diags.push_back({row, "bad source"});
        continue;
      }
      s.source = *src;
    }
    out.push_back(s);
  }
  return out;
}

// ---- weather and windows ----

std::pair<std::int64_t, std::int64_t> WeatherTable::cell(double lat, double lon) const {
  return {std::llround(lat * cells_per_degree_), std::llround(lon * cells_per_degree_)};
}

void WeatherTable::insert(double lat, double lon, Day day, const WeatherRow& row) {
  const auto [a, b] = cell(lat, lon);
  rows_[{a, b, day}] = row;
  ++cells_[{a, b}];
  first_ = first_ ? std::min(*first_, day) : day;
  last_ = last_ ? std::max(*last_, day) : day;
}

const WeatherRow* WeatherTable::find(double lat, double lon, Day day) const {
  const auto [a, b] = cell(lat, lon);
  auto it = rows_.find({a, b, day});
  return it == rows_.end() ? nullptr : &it->second;
}

bool WeatherTable::has_cell(double lat, double lon) const { return cells_.contains(cell(lat, lon)); }

WeatherTable read_weather(std::istream& in, std::vector<Diagnostic>& diags,
                          double cells_per_degree) {
  const Header h = read_header(in, "weather");
  const auto lat_i = require(h, {"latitude", "lat"}, "weather");
  const auto lon_i = require(h, {"longitude", "lon"}, "weather");
  const auto d_i = require(h, {"datetime", "date"}, "weather");
  std::array<std::size_t, 15> var_i{};
  for (std::size_t v = 0; v < kWeatherVars.size(); ++v) {
    auto i = h.find({kWeatherVars[v]});
    if (!i) throw ParseError("weather: missing column '" + std::string(kWeatherVars[v]) + "'");
    var_i[v] = *i;
  }

  WeatherTable table(cells_per_degree);
  std::string line;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto f = split(line);
    if (f.size() != h.names.size()) {
      diags.push_back({row, "field count mismatch"});
      continue;
    }
    const auto lat = parse_double(f[lat_i]);
    const auto lon = parse_double(f[lon_i]);
    const auto d = parse_date(f[d_i]);
    if (!lat || !lon || !d) {
      diags.push_back({row, "bad latitude/longitude/datetime"});
      continue;
    }
    WeatherRow values{};
    bool ok = true;
    for (std::size_t v = 0; v < var_i.size() && ok; ++v) {
      const auto x = parse_double(f[var_i[v]]);
      if (!x) {
        diags.push_back({row, "bad value for " + std::string(kWeatherVars[v])});
        ok = false;
      } else {
        values[v] = *x;
      }
    }
    if (ok) table.insert(*lat, *lon, *d, values);
  }
  return table;
}

WindowResult extract_windows(const std::vector<LabeledSample>& samples, const WeatherTable& table,
                             const WindowConfig& config) {
  if (config.pre < 0 || config.post < 1) throw ValidationError("window: need pre >= 0, post >= 1");
  WindowResult result;
  const int span = config.pre + config.post;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    const Day first = s.date - config.pre;
    const Day last = s.date + config.post - 1;
    if (!table.first_day() || first < *table.first_day() || last > *table.last_day()) {
      result.diagnostics.push_back({i + 1, "outside_coverage"});
      continue;
    }
    if (!table.has_cell(s.lat, s.lon)) {
      result.diagnostics.push_back({i + 1, "no_cell"});
      continue;
    }
    std::vector<const WeatherRow*> found(static_cast<std::size_t>(span));
    int missing = 0;
    for (int k = 0; k < span; ++k) {
      found[k] = table.find(s.lat, s.lon, first + k);
      missing += found[k] == nullptr;
    }
    if (missing > config.max_gaps) {
      result.diagnostics.push_back({i + 1, "gaps"});
      continue;
    }
    FeatureWindow w{s, first, {}, missing};
    w.days.reserve(found.size());
    // Carry forward; a leading gap takes the first available day.
    const WeatherRow* prev = nullptr;
    for (const auto* f : found) {
      if (f) {
        prev = f;
        break;
      }
    }
    for (const auto* f : found) {
      if (f) prev = f;
      w.days.push_back(*prev);
    }
    result.windows.push_back(std::move(w));
  }
  return result;
}

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, ptr);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

void write_windows(std::ostream& out, const std::vector<FeatureWindow>& windows) {
  out << "latitude,longitude,datetime,Wildfire";
  for (auto v : kWeatherVars) out << ',' << v;
  out << '\n';
  for (const auto& w : windows) {
    const std::string lat = format_number(w.sample.lat);
    const std::string lon = format_number(w.sample.lon);
    const char* label = w.sample.label == Label::Wildfire ? "Yes" : "No";
    for (std::size_t k = 0; k < w.days.size(); ++k) {
      out << lat << ',' << lon << ',' << format_date(w.first_day + static_cast<Day>(k)) << ','
          << label;
      for (double x : w.days[k]) out << ',' << format_number(x);
      out << '\n';
    }
  }
}

} // namespace helitack::dataset
