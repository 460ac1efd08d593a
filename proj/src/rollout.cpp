#include "helitack/rollout.hpp"

#include <cstdio>

namespace helitack {

Rollout run_episode(std::shared_ptr<const Scenario> scenario,
                    std::shared_ptr<const FuelCatalog> catalog, Policy& policy,
                    const EnvConfig& env_config, double gallons_per_drop) {
  Environment env(env_config);
  policy.reset();
  Observation obs = env.reset(std::move(scenario), std::move(catalog));
  while (!env.done()) obs = env.step(policy.act(obs)).obs;

  Rollout out;
  out.log = env.log();
  out.log.agent = std::string(policy.name());
  EpisodeSummary& s = out.summary;
  s.agent = out.log.agent;
  // Extinguished cells did burn; each can be extinguished only once.
  s.cells_burned = env.state().burnt_count + env.state().burning_count;
  for (const auto& d : out.log.drops) s.cells_burned += d.extinguished;
  s.timesteps = env.state().step;
  s.helitacks = static_cast<int>(out.log.drops.size());
  s.water_gal = s.helitacks * gallons_per_drop;
  s.outcome = out.log.outcome;
  s.reward_total = out.log.reward_total;
  s.checksum = checksum(env.state());
  return out;
}

std::string summary_line(const EpisodeSummary& s) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "Cells Burned: %d | Timesteps: %d | Helitacks: %d | Water Used: %.0f gal",
                s.cells_burned, s.timesteps, s.helitacks, s.water_gal);
  return buf;
}

std::vector<Scenario> fixture_suite(int count, int width, int height) {
  static constexpr SyntheticKind kinds[] = {SyntheticKind::FlatUniform, SyntheticKind::SingleSlope,
                                            SyntheticKind::Ridge, SyntheticKind::TwoFuel};
  std::vector<Scenario> out;
  for (int i = 0; i < count; ++i) {
    out.push_back(synthetic_scenario(kinds[i % 4], width, height, static_cast<std::uint64_t>(i)));
  }
  return out;
}

} // namespace helitack
