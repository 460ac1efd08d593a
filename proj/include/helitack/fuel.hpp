#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>

namespace helitack {

/// Homogeneous single-class fuel bed, imperial units.
///
/// `sigma` and `w0` describe the fine dead (1-h) class that carries the
/// spreading front; `mx` is the dead fuel moisture of extinction.
struct FuelModel {
  int id = 0;
  std::string name;
  double sigma = 0.0;        // surface-area-to-volume ratio, 1/ft
  double w0 = 0.0;           // oven-dry fuel load, lb/ft^2
  double delta = 0.0;        // fuel bed depth, ft
  double rho_p = 0.0;        // particle density, lb/ft^3
  double mx = 0.0;           // moisture of extinction, fraction
  double heat_content = 0.0; // BTU/lb

  friend bool operator==(const FuelModel&, const FuelModel&) = default;
};

// Throws ValidationError naming the first violated invariant.
void validate(const FuelModel& m);

class FuelCatalog {
public:
  FuelCatalog() = default;

  // Validates every entry and id uniqueness; throws ValidationError.
  FuelCatalog(std::map<int, FuelModel> entries, std::set<int> nonburnable);

  bool contains(int id) const { return entries_.count(id) || nonburnable_.count(id); }
  bool is_burnable(int id) const { return entries_.count(id) != 0; }

  // Throws ValidationError for nonburnable or unknown ids.
  const FuelModel& at(int id) const;

  const std::map<int, FuelModel>& entries() const { return entries_; }
  const std::set<int>& nonburnable_ids() const { return nonburnable_; }

  friend bool operator==(const FuelCatalog&, const FuelCatalog&) = default;

private:
  std::map<int, FuelModel> entries_;
  std::set<int> nonburnable_;
};

/// Conversion used to transcribe the published tables (tons/acre -> lb/ft^2).
inline constexpr double kTonsPerAcreToLbPerSqFt = 2000.0 / 43560.0;

/// Nonburnable land-cover codes shipped with the built-in catalog.
inline constexpr int kFuelUrban = 91;
inline constexpr int kFuelWater = 98;
inline constexpr int kFuelBarren = 99;

/// Anderson (1982) models 1-13 plus urban/water/barren nonburnable codes.
FuelCatalog builtin_catalog();

// Document layout: {"fuels": [{id, name, sigma, w0, delta, rho_p, mx,
// heat_content}, ...], "nonburnable": [ids]}.
FuelCatalog load_catalog(std::string_view document);
std::string serialize_catalog(const FuelCatalog& catalog);

} // namespace helitack
