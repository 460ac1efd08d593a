#pragma once

#include "helitack/ca_engine.hpp"
#include "helitack/episode_log.hpp"

#include <array>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

namespace helitack {

/// Wire values 0-4 in declaration order.
enum class Action : std::uint8_t { Up = 0, Down = 1, Left = 2, Right = 3, Drop = 4 };

inline constexpr int kActionCount = 5;
std::optional<Action> action_from_int(int value);
std::string_view to_string(Action a);

/// Phase channel values indexed by Phase: Unburnt 0, Burning 2/3, Burnt 1, Suppressed 1/3.
inline constexpr std::array<float, 4> kPhaseCodes = {0.0f, 2.0f / 3.0f, 1.0f, 1.0f / 3.0f};
inline constexpr float kBurningCode = kPhaseCodes[static_cast<int>(Phase::Burning)];

/// One grid snapshot: phase channel and intensity channel, row-major.
struct Frame {
  int width = 0;
  int height = 0;
  std::vector<float> phase;
  std::vector<float> intensity;
  friend bool operator==(const Frame&, const Frame&) = default;
};

// Renders the current state through the active SIMD kernels.
void render_frame(const SimState& state, Frame& out);
Frame render_frame(const SimState& state);

// 2x2 max-pooled copy for bandwidth-limited clients.
Frame downsample2x(const Frame& f);

inline constexpr int kFrameStack = 4;

struct Observation {
  std::array<std::shared_ptr<const Frame>, kFrameStack> frames; // [0] newest
  Cell agent_pos;
  bool over_burning = false;
};

struct RewardConfig {
  double extinguish_per_cell = 1.0;
  double growth_per_ignition = -0.02;
  double burnt_fraction_per_step = -0.001;
  double proximity_bonus = 0.01;
  int proximity_radius = 5;
  double idle_penalty = -0.005;
  double waste_penalty = -0.05;
};

struct EnvConfig {
  RewardConfig reward;
  int drop_radius = 2;
};

struct RewardBreakdown {
  double extinguish = 0.0;
  double containment = 0.0;
  double proximity = 0.0;
  double idle_penalty = 0.0;
  double waste_penalty = 0.0;
  double total = 0.0;
  friend bool operator==(const RewardBreakdown&, const RewardBreakdown&) = default;
};

// extinguish + containment + proximity + idle_penalty + waste_penalty, in that order.
double sum_terms(const RewardBreakdown& r);

struct StepInfo {
  StepDelta delta;
  int burnt_count = 0;
  int step = 0;
  friend bool operator==(const StepInfo&, const StepInfo&) = default;
};

struct StepResult {
  Observation obs;
  RewardBreakdown reward;
  bool done = false;
  StepInfo info;
};

/// Helitack suppression episode over the CA engine.
class Environment {
public:
  explicit Environment(EnvConfig config = {});

  // Rebuilds the engine only when the scenario or catalog object changes.
  // Throws ValidationError when agent_start is out of bounds.
  Observation reset(std::shared_ptr<const Scenario> scenario,
                    std::shared_ptr<const FuelCatalog> catalog,
                    std::optional<Cell> agent_start = std::nullopt);

  // Throws ContractError before reset or after done.
  StepResult step(Action action);

  Observation observation() const;
  bool has_episode() const { return engine_ != nullptr; }
  bool done() const { return done_; }
  Cell agent_pos() const { return agent_; }
  StepInfo last_info() const { return last_info_; }
  const SimState& state() const { return state_; }
  const Engine& engine() const { return *engine_; }
  const EpisodeLog& log() const { return log_; }
  const EnvConfig& config() const { return config_; }

  static Cell default_start(const Scenario& s) { return {s.height / 2, s.width / 2}; }

private:
  void push_frame();
  bool burning_within(Cell center, int radius) const;
  void record_outcome();

  EnvConfig config_;
  std::shared_ptr<const Scenario> scenario_;
  std::shared_ptr<const FuelCatalog> catalog_;
  std::shared_ptr<const Engine> engine_;
  SimState state_;
  Cell agent_;
  std::array<std::shared_ptr<Frame>, kFrameStack> ring_;
  bool done_ = false;
  StepInfo last_info_;
  EpisodeLog log_;
};

} // namespace helitack
