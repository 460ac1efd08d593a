#include "helitack/fuel.hpp"

#include "helitack/error.hpp"

#include <json.hpp>

#include <cmath>
#include <sstream>

namespace helitack {

using nlohmann::json;

namespace {

void require(bool ok, const FuelModel& m, const char* field, const char* rule) {
  if (!ok) {
    std::ostringstream msg;
    msg << "fuel " << m.id << ": " << field << " " << rule;
    throw ValidationError(msg.str());
  }
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

FuelModel anderson(int id, const char* name, double load_tpa, double sigma, double depth,
                   double mx) {
  return FuelModel{id, name, sigma, load_tpa * kTonsPerAcreToLbPerSqFt, depth, 32.0, mx, 8000.0};
}

template <typename T>
T field(const json& obj, const char* key, std::size_t index) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ParseError("fuels[" + std::to_string(index) + "]: missing field '" + key + "'");
  }
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ParseError("fuels[" + std::to_string(index) + "]: field '" + key + "' has wrong type");
  }
}

} // namespace

void validate(const FuelModel& m) {
  require(finite_positive(m.sigma), m, "sigma", "must be > 0");
  require(finite_positive(m.w0), m, "w0", "must be > 0");
  require(finite_positive(m.delta), m, "delta", "must be > 0");
  require(finite_positive(m.rho_p), m, "rho_p", "must be > 0");
  require(finite_positive(m.heat_content), m, "heat_content", "must be > 0");
  require(std::isfinite(m.mx) && m.mx > 0.0 && m.mx < 1.0, m, "mx", "out of range (0, 1)");
}

FuelCatalog::FuelCatalog(std::map<int, FuelModel> entries, std::set<int> nonburnable)
    : entries_(std::move(entries)), nonburnable_(std::move(nonburnable)) {
  for (const auto& [id, model] : entries_) {
    if (id != model.id) {
      throw ValidationError("fuel " + std::to_string(model.id) + " stored under key " +
                            std::to_string(id));
    }
    validate(model);
    if (nonburnable_.count(id)) {
      throw ValidationError("duplicate id " + std::to_string(id) +
                            ": listed as both burnable and nonburnable");
    }
  }
}

const FuelModel& FuelCatalog::at(int id) const {
  auto it = entries_.find(id);
  if (it == entries_.end()) {
    throw ValidationError(nonburnable_.count(id) ? "fuel " + std::to_string(id) + " is nonburnable"
                                                 : "unknown fuel id " + std::to_string(id));
  }
  return it->second;
}

FuelCatalog builtin_catalog() {
  // Anderson (1982), 1-h class: load (t/ac), SAV (1/ft), depth (ft), Mx.
  const FuelModel models[] = {
      anderson(1, "short grass", 0.74, 3500, 1.0, 0.12),
      anderson(2, "timber grass and understory", 2.00, 3000, 1.0, 0.15),
      anderson(3, "tall grass", 3.01, 1500, 2.5, 0.25),
      anderson(4, "chaparral", 5.01, 2000, 6.0, 0.20),
      anderson(5, "brush", 1.00, 2000, 2.0, 0.20),
      anderson(6, "dormant brush", 1.50, 1750, 2.5, 0.25),
      anderson(7, "southern rough", 1.13, 1750, 2.5, 0.40),
      anderson(8, "closed timber litter", 1.50, 2000, 0.2, 0.30),
      anderson(9, "hardwood litter", 2.92, 2500, 0.2, 0.25),
      anderson(10, "timber litter and understory", 3.01, 2000, 1.0, 0.25),
      anderson(11, "light logging slash", 1.50, 1500, 1.0, 0.15),
      anderson(12, "medium logging slash", 4.01, 1500, 2.3, 0.20),
      anderson(13, "heavy logging slash", 7.01, 1500, 3.0, 0.25),
  };
  std::map<int, FuelModel> entries;
  for (const auto& m : models) entries.emplace(m.id, m);
  return FuelCatalog(std::move(entries), {kFuelUrban, kFuelWater, kFuelBarren});
}

FuelCatalog load_catalog(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("catalog: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("fuels") || !doc["fuels"].is_array()) {
    throw ParseError("catalog: missing 'fuels' array");
  }

  std::map<int, FuelModel> entries;
  const auto& fuels = doc["fuels"];
  for (std::size_t i = 0; i < fuels.size(); ++i) {
    const auto& f = fuels[i];
    if (!f.is_object()) throw ParseError("fuels[" + std::to_string(i) + "]: not an object");
    FuelModel m;
    m.id = field<int>(f, "id", i);
    m.name = field<std::string>(f, "name", i);
    m.sigma = field<double>(f, "sigma", i);
    m.w0 = field<double>(f, "w0", i);
    m.delta = field<double>(f, "delta", i);
    m.rho_p = field<double>(f, "rho_p", i);
    m.mx = field<double>(f, "mx", i);
    m.heat_content = field<double>(f, "heat_content", i);
    if (!entries.emplace(m.id, m).second) {
      throw ValidationError("duplicate id " + std::to_string(m.id));
    }
  }

  std::set<int> nonburnable;
  if (doc.contains("nonburnable")) {
    if (!doc["nonburnable"].is_array()) throw ParseError("catalog: 'nonburnable' must be an array");
    for (const auto& id : doc["nonburnable"]) {
      if (!id.is_number_integer()) throw ParseError("catalog: nonburnable ids must be integers");
      if (!nonburnable.insert(id.get<int>()).second) {
        throw ValidationError("duplicate id " + std::to_string(id.get<int>()));
      }
    }
  }
  return FuelCatalog(std::move(entries), std::move(nonburnable));
}

std::string serialize_catalog(const FuelCatalog& catalog) {
  json fuels = json::array();
  for (const auto& [id, m] : catalog.entries()) {
    fuels.push_back({{"id", m.id},
                     {"name", m.name},
                     {"sigma", m.sigma},
                     {"w0", m.w0},
                     {"delta", m.delta},
                     {"rho_p", m.rho_p},
                     {"mx", m.mx},
                     {"heat_content", m.heat_content}});
  }
  json doc = {{"fuels", fuels}, {"nonburnable", catalog.nonburnable_ids()}};
  return doc.dump(2);
}

} // namespace helitack
