#pragma once

#include "helitack/ca_engine.hpp"
#include "helitack/fuel.hpp"
#include "helitack/rng.hpp"
#include "helitack/terrain.hpp"

#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

namespace helitack::testing {

inline std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(HELITACK_TEST_DATA) / name;
}

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::shared_ptr<const FuelCatalog> shared_catalog() {
  static const auto cat = std::make_shared<const FuelCatalog>(builtin_catalog());
  return cat;
}

// Random scenario with mixed fuels, bumpy terrain, random wind and a few
// ignitions, some delayed.
inline Scenario random_scenario(Rng& rng, int max_w = 120, int max_h = 80) {
  Scenario s;
  s.width = static_cast<int>(rng.between(8, max_w));
  s.height = static_cast<int>(rng.between(8, max_h));
  s.cell_size_m = rng.uniform(10.0, 60.0);
  const std::size_t n = s.cell_count();
  s.elevation.resize(n);
  s.fuel_code.resize(n);
  const double ax = rng.uniform(-3, 3), ay = rng.uniform(-3, 3), fx = rng.uniform(0.05, 0.4);
  static constexpr int fuels[] = {1, 2, 3, 4, 5, 8, 9, 10, 11, 98, 99};
  for (int r = 0; r < s.height; ++r) {
    for (int c = 0; c < s.width; ++c) {
      const std::size_t i = static_cast<std::size_t>(r) * s.width + c;
      s.elevation[i] = 200.0 + ax * c + ay * r + 20.0 * std::sin(fx * (r + c));
      s.fuel_code[i] = rng.uniform() < 0.7 ? 1 : fuels[rng.below(std::size(fuels))];
    }
  }
  s.wind_speed_ms = rng.uniform(0.0, 4.0);
  s.wind_dir_deg = rng.uniform(0.0, 360.0);
  s.moisture = rng.uniform(0.01, 0.3);
  const int ign = static_cast<int>(rng.between(1, 4));
  for (int k = 0; k < ign; ++k) {
    const int r = static_cast<int>(rng.below(s.height));
    const int c = static_cast<int>(rng.below(s.width));
    s.fuel_code[static_cast<std::size_t>(r) * s.width + c] = 1;
    s.ignitions.push_back({r, c, k == 0 ? 0 : static_cast<int>(rng.between(0, 30))});
  }
  s.max_steps = static_cast<int>(rng.between(20, 200));
  s.seed = rng.next();
  return s;
}

// Quarter turn clockwise: (r, c) -> (c, H-1-r). Compass wind rotates by +90.
inline Scenario rotate_cw(const Scenario& s) {
  Scenario o = s;
  o.width = s.height;
  o.height = s.width;
  for (int r = 0; r < s.height; ++r) {
    for (int c = 0; c < s.width; ++c) {
      const std::size_t from = static_cast<std::size_t>(r) * s.width + c;
      const std::size_t to = static_cast<std::size_t>(c) * o.width + (s.height - 1 - r);
      o.elevation[to] = s.elevation[from];
      o.fuel_code[to] = s.fuel_code[from];
    }
  }
  for (auto& ig : o.ignitions) ig = {ig.col, s.height - 1 - ig.row, ig.step};
  o.wind_dir_deg = std::fmod(s.wind_dir_deg + 90.0, 360.0);
  return o;
}

} // namespace helitack::testing
