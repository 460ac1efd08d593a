#pragma once

#include "helitack/agents.hpp"
#include "helitack/report.hpp"

#include <memory>
#include <string>

namespace helitack {

/// One row of the agent-comparison table.
struct EpisodeSummary {
  std::string agent;
  int cells_burned = 0; // ever ignited: Burnt + Burning + extinguished
  int timesteps = 0;
  int helitacks = 0;
  double water_gal = 0.0;
  Outcome outcome;
  double reward_total = 0.0;
  std::uint64_t checksum = 0;
};

struct Rollout {
  EpisodeSummary summary;
  EpisodeLog log;
};

// Runs `policy` until the episode finishes.
Rollout run_episode(std::shared_ptr<const Scenario> scenario,
                    std::shared_ptr<const FuelCatalog> catalog, Policy& policy,
                    const EnvConfig& env = {}, double gallons_per_drop = 800.0);

// "Cells Burned: N | Timesteps: N | Helitacks: N | Water Used: N gal"
std::string summary_line(const EpisodeSummary& s);

// Fixed 20-scenario comparison suite at 240x160: synthetic kinds cycled,
// seed = index.
std::vector<Scenario> fixture_suite(int count = 20, int width = kDefaultWidth,
                                    int height = kDefaultHeight);

} // namespace helitack
