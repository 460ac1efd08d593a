#include "helitack/terrain.hpp"

#include "helitack/error.hpp"
#include "helitack/rng.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <sstream>

namespace helitack {

using nlohmann::json;

namespace {

constexpr char kBlobMagic[4] = {'H', 'T', 'K', 'G'};

std::string md5_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_md5(), nullptr) != 1) {
    throw std::runtime_error("md5 digest failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

template <typename T>
void put(std::string& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

template <typename T>
T take(const std::string& in, std::size_t& pos) {
  if (pos + sizeof(T) > in.size()) throw ParseError("grid blob truncated");
  T v;
  std::memcpy(&v, in.data() + pos, sizeof(T));
  pos += sizeof(T);
  return v;
}

// Little-endian layout: magic, u32 width, u32 height, f64 elevation[], i32 fuel[].
std::string encode_blob(const Scenario& s) {
  std::string out(kBlobMagic, 4);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(s.width));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(s.height));
  for (double e : s.elevation) put<double>(out, e);
  for (int f : s.fuel_code) put<std::int32_t>(out, f);
  return out;
}

void decode_blob(const std::string& bytes, Scenario& s) {
  if (bytes.size() < 12 || std::memcmp(bytes.data(), kBlobMagic, 4) != 0) {
    throw ParseError("grid blob: bad magic");
  }
  std::size_t pos = 4;
  const auto w = take<std::uint32_t>(bytes, pos);
  const auto h = take<std::uint32_t>(bytes, pos);
  if (static_cast<int>(w) != s.width || static_cast<int>(h) != s.height) {
    throw ValidationError("grid blob: dimensions " + std::to_string(w) + "x" + std::to_string(h) +
                          " do not match document");
  }
  const std::size_t n = static_cast<std::size_t>(w) * h;
  s.elevation.resize(n);
  s.fuel_code.resize(n);
  for (auto& e : s.elevation) e = take<double>(bytes, pos);
  for (auto& f : s.fuel_code) f = take<std::int32_t>(bytes, pos);
  if (pos != bytes.size()) throw ParseError("grid blob: trailing bytes");
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <typename T>
T get(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) throw ParseError(std::string("scenario: missing field '") + key + "'");
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ParseError(std::string("scenario: field '") + key + "' has wrong type");
  }
}

json to_json_doc(const Scenario& s) {
  json ignitions = json::array();
  for (const auto& ig : s.ignitions) {
    ignitions.push_back({{"row", ig.row}, {"col", ig.col}, {"step", ig.step}});
  }
  json doc = {{"version", "1.0"},
              {"width", s.width},
              {"height", s.height},
              {"cell_size_m", s.cell_size_m},
              {"wind", {{"speed_ms", s.wind_speed_ms}, {"dir_deg", s.wind_dir_deg}}},
              {"moisture", s.moisture},
              {"ignitions", ignitions},
              {"seed", s.seed},
              {"max_steps", s.max_steps}};
  if (s.forecast) {
    doc["forecast"] = {{"lat", s.forecast->lat},
                       {"lon", s.forecast->lon},
                       {"datetime", s.forecast->datetime},
                       {"confidence", s.forecast->confidence}};
  }
  return doc;
}

} // namespace

void validate(const GeoRef& g) {
  if (!(g.lat >= -90.0 && g.lat <= 90.0)) {
    throw ValidationError("lat out of range: " + std::to_string(g.lat));
  }
  if (!(g.lon >= -180.0 && g.lon <= 180.0)) {
    throw ValidationError("lon out of range: " + std::to_string(g.lon));
  }
}

double Scenario::wind_dir_rad() const {
  return (90.0 - wind_dir_deg) * std::numbers::pi / 180.0;
}

double Scenario::wind_speed_ft_min() const { return wind_speed_ms * 60.0 * kFeetPerMeter; }

void validate(const Scenario& s, const FuelCatalog& catalog) {
  if (s.width <= 0 || s.height <= 0) throw ValidationError("width and height must be positive");
  if (!(s.cell_size_m > 0.0) || !std::isfinite(s.cell_size_m)) {
    throw ValidationError("cell_size_m must be > 0");
  }
  if (s.elevation.size() != s.cell_count()) {
    throw ValidationError("elevation: expected " + std::to_string(s.cell_count()) +
                          " entries, got " + std::to_string(s.elevation.size()));
  }
  if (s.fuel_code.size() != s.cell_count()) {
    throw ValidationError("fuel_code: expected " + std::to_string(s.cell_count()) +
                          " entries, got " + std::to_string(s.fuel_code.size()));
  }
  for (std::size_t i = 0; i < s.elevation.size(); ++i) {
    if (!std::isfinite(s.elevation[i])) {
      throw ValidationError("elevation[" + std::to_string(i) + "] is not finite");
    }
  }
  for (std::size_t i = 0; i < s.fuel_code.size(); ++i) {
    if (!catalog.contains(s.fuel_code[i])) {
      throw ValidationError("fuel_code[" + std::to_string(i) + "]: unknown fuel id " +
                            std::to_string(s.fuel_code[i]));
    }
  }
  if (!(s.wind_speed_ms >= 0.0) || !std::isfinite(s.wind_speed_ms)) {
    throw ValidationError("wind.speed_ms must be >= 0");
  }
  if (!std::isfinite(s.wind_dir_deg)) throw ValidationError("wind.dir_deg must be finite");
  if (!(s.moisture >= 0.0 && s.moisture <= 1.0)) {
    throw ValidationError("moisture must lie in [0, 1]");
  }
  if (s.max_steps <= 0) throw ValidationError("max_steps must be positive");
  for (std::size_t i = 0; i < s.ignitions.size(); ++i) {
    const auto& ig = s.ignitions[i];
    if (!s.in_bounds({ig.row, ig.col})) {
      throw ValidationError("ignitions[" + std::to_string(i) + "]: (" + std::to_string(ig.row) +
                            ", " + std::to_string(ig.col) + ") out of bounds");
    }
    if (ig.step < 0) {
      throw ValidationError("ignitions[" + std::to_string(i) + "]: step must be >= 0");
    }
  }
  if (s.forecast) {
    validate(GeoRef{s.forecast->lat, s.forecast->lon});
    if (!(s.forecast->confidence >= 0.0 && s.forecast->confidence <= 1.0)) {
      throw ValidationError("forecast.confidence must lie in [0, 1]");
    }
  }
}

Scenario load_scenario(std::string_view document, const FuelCatalog& catalog,
                       const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("scenario: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("scenario: document must be an object");

  const auto version = get<std::string>(doc, "version");
  int major = -1;
  try {
    major = std::stoi(version.substr(0, version.find('.')));
  } catch (const std::exception&) {
    throw ParseError("scenario: malformed version '" + version + "'");
  }
  if (major != kScenarioMajorVersion) {
    throw ParseError("scenario: unsupported major version " + std::to_string(major));
  }

  Scenario s;
  s.width = get<int>(doc, "width");
  s.height = get<int>(doc, "height");
  s.cell_size_m = get<double>(doc, "cell_size_m");
  const auto& wind = doc.contains("wind") ? doc["wind"] : throw ParseError("scenario: missing field 'wind'");
  s.wind_speed_ms = get<double>(wind, "speed_ms");
  s.wind_dir_deg = get<double>(wind, "dir_deg");
  s.moisture = get<double>(doc, "moisture");
  s.seed = get<std::uint64_t>(doc, "seed");
  s.max_steps = get<int>(doc, "max_steps");

  const auto ignitions = get<json>(doc, "ignitions");
  if (!ignitions.is_array()) throw ParseError("scenario: 'ignitions' must be an array");
  for (const auto& ig : ignitions) {
    s.ignitions.push_back({get<int>(ig, "row"), get<int>(ig, "col"), get<int>(ig, "step")});
  }

  if (doc.contains("forecast") && !doc["forecast"].is_null()) {
    const auto& f = doc["forecast"];
    s.forecast = Forecast{get<double>(f, "lat"), get<double>(f, "lon"),
                          get<std::string>(f, "datetime"), get<double>(f, "confidence")};
  }

  if (doc.contains("grid_blob")) {
    const auto& blob = doc["grid_blob"];
    const auto rel = get<std::string>(blob, "path");
    const auto expected = get<std::string>(blob, "md5");
    const auto bytes = read_file(base_dir / rel);
    if (md5_hex(bytes) != expected) throw ValidationError("grid blob: content hash mismatch");
    if (s.width <= 0 || s.height <= 0) throw ValidationError("width and height must be positive");
    decode_blob(bytes, s);
  } else {
    s.elevation = get<std::vector<double>>(doc, "elevation");
    s.fuel_code = get<std::vector<int>>(doc, "fuel_code");
  }

  validate(s, catalog);
  return s;
}

Scenario load_scenario_file(const std::filesystem::path& path, const FuelCatalog& catalog) {
  return load_scenario(read_file(path), catalog, path.parent_path());
}

std::string serialize_scenario(const Scenario& s) {
  json doc = to_json_doc(s);
  doc["elevation"] = s.elevation;
  doc["fuel_code"] = s.fuel_code;
  return doc.dump();
}

std::string serialize_scenario(const Scenario& s, const std::filesystem::path& base_dir,
                               const std::filesystem::path& blob_path) {
  const std::string bytes = encode_blob(s);
  {
    std::ofstream out(base_dir / blob_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (base_dir / blob_path).string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  }
  json doc = to_json_doc(s);
  doc["grid_blob"] = {{"path", blob_path.generic_string()}, {"md5", md5_hex(bytes)}};
  return doc.dump(2);
}

std::optional<SyntheticKind> parse_synthetic_kind(std::string_view name) {
  if (name == "flat_uniform") return SyntheticKind::FlatUniform;
  if (name == "single_slope") return SyntheticKind::SingleSlope;
  if (name == "ridge") return SyntheticKind::Ridge;
  if (name == "two_fuel") return SyntheticKind::TwoFuel;
  return std::nullopt;
}

std::string_view to_string(SyntheticKind kind) {
  switch (kind) {
  case SyntheticKind::FlatUniform: return "flat_uniform";
  case SyntheticKind::SingleSlope: return "single_slope";
  case SyntheticKind::Ridge: return "ridge";
  case SyntheticKind::TwoFuel: return "two_fuel";
  }
  return "unknown";
}

Scenario synthetic_scenario(SyntheticKind kind, int width, int height, std::uint64_t seed) {
  if (width < 8 || height < 8) throw ValidationError("synthetic scenarios need width, height >= 8");

  Scenario s;
  s.width = width;
  s.height = height;
  s.seed = seed;
  s.moisture = 0.03;
  s.max_steps = 1000;
  s.elevation.assign(s.cell_count(), 100.0);
  s.fuel_code.assign(s.cell_count(), 1);

  Rng rng(seed ^ (static_cast<std::uint64_t>(kind) + 1) * 0x9e3779b97f4a7c15ULL);
  const Cell center{height / 2, width / 2};
  Cell ignition = center;
  if (kind != SyntheticKind::FlatUniform) {
    ignition.row += static_cast<int>(rng.between(-height / 8, height / 8));
    ignition.col += static_cast<int>(rng.between(-width / 8, width / 8));
  }

  switch (kind) {
  case SyntheticKind::FlatUniform:
    break;
  case SyntheticKind::SingleSlope: {
    // 20% grade rising toward the east.
    const double rise = 0.2 * s.cell_size_m;
    for (int r = 0; r < height; ++r)
      for (int c = 0; c < width; ++c) s.elevation[s.index({r, c})] = 100.0 + rise * c;
    break;
  }
  case SyntheticKind::Ridge: {
    const int ridge_row = height / 2 + static_cast<int>(rng.between(-height / 8, height / 8));
    const double half_width = std::max(1.0, height / 4.0);
    for (int r = 0; r < height; ++r) {
      const double h = 60.0 * std::max(0.0, 1.0 - std::abs(r - ridge_row) / half_width);
      for (int c = 0; c < width; ++c) s.elevation[s.index({r, c})] = 100.0 + h;
    }
    s.wind_speed_ms = 0.5;
    s.wind_dir_deg = 45.0 * static_cast<double>(rng.below(8));
    break;
  }
  case SyntheticKind::TwoFuel: {
    const int boundary = width / 2 + static_cast<int>(rng.between(-width / 8, width / 8));
    for (int r = 0; r < height; ++r)
      for (int c = boundary; c < width; ++c) s.fuel_code[s.index({r, c})] = 3;
    s.wind_speed_ms = 0.25;
    s.wind_dir_deg = 90.0;
    break;
  }
  }
  s.ignitions.push_back({ignition.row, ignition.col, 0});
  return s;
}

double slope_between(const Scenario& s, Cell from, Cell to) {
  if (!s.in_bounds(from) || !s.in_bounds(to)) throw DomainError("slope_between: cell out of bounds");
  const int dr = std::abs(to.row - from.row);
  const int dc = std::abs(to.col - from.col);
  if (std::max(dr, dc) != 1) throw DomainError("slope_between: cells are not adjacent");
  const double run = (dr == 1 && dc == 1) ? s.cell_size_m * std::numbers::sqrt2 : s.cell_size_m;
  return (s.elevation[s.index(to)] - s.elevation[s.index(from)]) / run;
}

} // namespace helitack
