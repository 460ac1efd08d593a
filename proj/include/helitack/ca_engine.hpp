#pragma once

#include "helitack/fuel.hpp"
#include "helitack/rng.hpp"
#include "helitack/terrain.hpp"

#include <cstdint>
#include <memory>
#include <vector>

namespace helitack {

enum class Phase : std::uint8_t { Unburnt = 0, Burning = 1, Burnt = 2, Suppressed = 3 };

// Unburnt->Burning->Burnt and {Unburnt, Burning}->Suppressed; staying put is allowed.
constexpr bool transition_allowed(Phase from, Phase to) {
  if (from == to) return true;
  switch (from) {
  case Phase::Unburnt: return to == Phase::Burning || to == Phase::Suppressed;
  case Phase::Burning: return to == Phase::Burnt || to == Phase::Suppressed;
  default: return false;
  }
}

struct CellState {
  Phase phase = Phase::Unburnt;
  float intensity = 0.0f;
  double arrival = 0.0;
  int burn_remaining = 0;
};

struct StepDelta {
  int newly_ignited = 0;
  int newly_burnt = 0;
  int extinguished = 0;
  friend bool operator==(const StepDelta&, const StepDelta&) = default;
};

/// Simulation time per engine step, minutes.
inline constexpr double kStepMinutes = 1.0;
/// Burn duration scale: ceil(kBurnSteps * w0 / w0_ref) steps.
inline constexpr double kBurnSteps = 20.0;
/// Reaction intensity mapped to intensity 1.0, BTU/ft^2/min.
inline constexpr double kIntensityRef = 5000.0;
/// Floor keeping intensity > 0 for every burning cell, even past extinction moisture.
inline constexpr float kMinIntensity = 0.01f;
/// Fixed-point scale for arrival fractions; integer sums are order independent.
inline constexpr double kArrivalScale = 1099511627776.0; // 2^40
inline constexpr std::int64_t kArrivalThreshold = std::int64_t{1} << 40;

/// Mutable per-episode state. Structure-of-arrays over row-major cells.
struct SimState {
  int step = 0;
  int width = 0;
  int height = 0;
  std::vector<Phase> phase;
  std::vector<float> intensity;
  std::vector<std::int64_t> arrival_fx; // arrival fraction * 2^40
  std::vector<std::int32_t> burn_remaining;
  std::vector<std::uint32_t> frontier; // Burning cells, deterministic order
  int burnt_count = 0;
  int burning_count = 0;
  std::size_t next_ignition = 0; // cursor into the engine's ignition schedule
  Rng rng{0};

  CellState cell(std::size_t i) const {
    return {phase[i], intensity[i], static_cast<double>(arrival_fx[i]) / kArrivalScale,
            burn_remaining[i]};
  }
  CellState cell(Cell c) const { return cell(static_cast<std::size_t>(c.row) * width + c.col); }
};

struct Outcome {
  enum class Kind { Active, ContainedAt, MaxStepsReached };
  Kind kind = Kind::Active;
  int step = 0;
  friend bool operator==(const Outcome&, const Outcome&) = default;
};

/// Fire spread over one scenario.
///
/// Construction validates the scenario against the catalog and precomputes
/// every neighbour-to-neighbour arrival increment, so a step costs
/// O(|frontier| * 8). The engine itself is immutable and may be shared by
/// any number of SimStates on different threads.
class Engine {
public:
  Engine(std::shared_ptr<const Scenario> scenario, std::shared_ptr<const FuelCatalog> catalog);

  const Scenario& scenario() const { return *scenario_; }
  const FuelCatalog& catalog() const { return *catalog_; }

  SimState init() const;

  // Advances one step; throws ContractError when state.step >= max_steps.
  StepDelta step(SimState& state) const;

  // Suppresses every Unburnt/Burning cell within Chebyshev `radius` of
  // `center`; returns how many were Burning.
  int apply_suppressant(SimState& state, Cell center, int radius) const;

  Outcome is_finished(const SimState& state) const;

  // Quantized arrival increment from `from` into its neighbour in direction k
  // (see kNeighbourOffsets); 0 when the target is out of bounds or unburnable.
  std::int64_t increment(std::size_t from, int k) const { return increments_[from * 8 + k]; }
  bool burnable(std::size_t i) const { return burn_steps_[i] > 0; }

  static constexpr int kNeighbourOffsets[8][2] = {{-1, -1}, {-1, 0}, {-1, 1}, {0, -1},
                                                  {0, 1},   {1, -1}, {1, 0},  {1, 1}};

private:
  void ignite(SimState& state, std::size_t i) const;
  void apply_scheduled(SimState& state, StepDelta* delta) const;

  std::shared_ptr<const Scenario> scenario_;
  std::shared_ptr<const FuelCatalog> catalog_;
  std::vector<Ignition> schedule_;       // sorted by step, stable
  std::vector<std::int64_t> increments_; // cell * 8 + k
  std::vector<std::int32_t> burn_steps_; // 0 for nonburnable cells
  std::vector<float> ignite_intensity_;
};

// Burning cells recomputed from the phase array, ascending.
std::vector<std::uint32_t> recompute_frontier(const SimState& state);

// FNV-1a over every field that influences future evolution.
std::uint64_t checksum(const SimState& state);

} // namespace helitack
