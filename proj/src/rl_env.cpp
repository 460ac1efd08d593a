#include "helitack/rl_env.hpp"

#include "helitack/error.hpp"
#include "helitack/simd/kernels.hpp"

#include <algorithm>

namespace helitack {

std::optional<Action> action_from_int(int value) {
  if (value < 0 || value >= kActionCount) return std::nullopt;
  return static_cast<Action>(value);
}

std::string_view to_string(Action a) {
  switch (a) {
  case Action::Up: return "up";
  case Action::Down: return "down";
  case Action::Left: return "left";
  case Action::Right: return "right";
  case Action::Drop: return "drop";
  }
  return "?";
}

void render_frame(const SimState& state, Frame& out) {
  const std::size_t n = state.phase.size();
  out.width = state.width;
  out.height = state.height;
  out.phase.resize(n);
  out.intensity.assign(state.intensity.begin(), state.intensity.end());
  static_assert(sizeof(Phase) == 1);
  simd::kernels().map_codes(reinterpret_cast<const std::uint8_t*>(state.phase.data()), n,
                            kPhaseCodes, out.phase.data());
}

Frame render_frame(const SimState& state) {
  Frame f;
  render_frame(state, f);
  return f;
}

Frame downsample2x(const Frame& f) {
  Frame out;
  out.width = (f.width + 1) / 2;
  out.height = (f.height + 1) / 2;
  const std::size_t n = static_cast<std::size_t>(out.width) * out.height;
  out.phase.resize(n);
  out.intensity.resize(n);
  const auto& k = simd::kernels();
  k.max_pool2x(f.phase.data(), f.width, f.height, out.phase.data());
  k.max_pool2x(f.intensity.data(), f.width, f.height, out.intensity.data());
  return out;
}

double sum_terms(const RewardBreakdown& r) {
  double total = 0.0;
  total += r.extinguish;
  total += r.containment;
  total += r.proximity;
  total += r.idle_penalty;
  total += r.waste_penalty;
  return total;
}

Environment::Environment(EnvConfig config) : config_(config) {
  if (config_.drop_radius < 0) throw ValidationError("drop_radius must be >= 0");
  if (config_.reward.proximity_radius < 0) throw ValidationError("proximity_radius must be >= 0");
}

Observation Environment::reset(std::shared_ptr<const Scenario> scenario,
                               std::shared_ptr<const FuelCatalog> catalog,
                               std::optional<Cell> agent_start) {
  if (!scenario || !catalog) throw ContractError("reset: scenario and catalog are required");
  const Cell start = agent_start.value_or(default_start(*scenario));
  if (!scenario->in_bounds(start)) {
    throw ValidationError("agent_start (" + std::to_string(start.row) + ", " +
                          std::to_string(start.col) + ") is out of bounds");
  }
  if (!engine_ || scenario != scenario_ || catalog != catalog_) {
    engine_ = std::make_shared<const Engine>(scenario, catalog);
    scenario_ = std::move(scenario);
    catalog_ = std::move(catalog);
  }
  state_ = engine_->init();
  agent_ = start;

  auto first = std::make_shared<Frame>();
  render_frame(state_, *first);
  ring_.fill(first);

  const Scenario& s = *scenario_;
  log_ = EpisodeLog{};
  log_.width = s.width;
  log_.height = s.height;
  log_.cell_size_m = s.cell_size_m;
  log_.max_steps = s.max_steps;
  log_.ignitions = s.ignitions;
  log_.forecast = s.forecast;
  log_.burnt_trajectory.push_back(state_.burnt_count);
  log_.burning_trajectory.push_back(state_.burning_count);

  last_info_ = StepInfo{{}, state_.burnt_count, state_.step};
  done_ = false;
  record_outcome();
  return observation();
}

void Environment::record_outcome() {
  log_.outcome = engine_->is_finished(state_);
  if (log_.outcome.kind != Outcome::Kind::Active) {
    done_ = true;
    log_.final_phase = state_.phase;
  }
}

void Environment::push_frame() {
  // Reuse the oldest buffer when no observation still holds it.
  std::shared_ptr<Frame> slot = std::move(ring_[kFrameStack - 1]);
  if (!slot || slot.use_count() != 1) {
    slot = std::make_shared<Frame>();
  }
  for (int i = kFrameStack - 1; i > 0; --i) ring_[i] = std::move(ring_[i - 1]);
  render_frame(state_, *slot);
  ring_[0] = std::move(slot);
}

bool Environment::burning_within(Cell center, int radius) const {
  const int r0 = std::max(0, center.row - radius);
  const int r1 = std::min(state_.height - 1, center.row + radius);
  const int c0 = std::max(0, center.col - radius);
  const int c1 = std::min(state_.width - 1, center.col + radius);
  for (int r = r0; r <= r1; ++r) {
    const Phase* row = state_.phase.data() + static_cast<std::size_t>(r) * state_.width;
    for (int c = c0; c <= c1; ++c) {
      if (row[c] == Phase::Burning) return true;
    }
  }
  return false;
}

StepResult Environment::step(Action action) {
  if (!engine_) throw ContractError("step: call reset first");
  if (done_) throw ContractError("step: episode is done; call reset");
  if (static_cast<int>(action) >= kActionCount) {
    throw ValidationError("step: action out of range");
  }

  int extinguished = 0;
  switch (action) {
  case Action::Up: agent_.row = std::max(0, agent_.row - 1); break;
  case Action::Down: agent_.row = std::min(state_.height - 1, agent_.row + 1); break;
  case Action::Left: agent_.col = std::max(0, agent_.col - 1); break;
  case Action::Right: agent_.col = std::min(state_.width - 1, agent_.col + 1); break;
  case Action::Drop:
    extinguished = engine_->apply_suppressant(state_, agent_, config_.drop_radius);
    log_.drops.push_back({state_.step, agent_.row, agent_.col, extinguished});
    break;
  }

  StepDelta delta = engine_->step(state_);
  delta.extinguished = extinguished;

  const RewardConfig& rc = config_.reward;
  RewardBreakdown rw;
  rw.extinguish = rc.extinguish_per_cell * extinguished;
  rw.containment = rc.growth_per_ignition * delta.newly_ignited +
                   rc.burnt_fraction_per_step * state_.burnt_count /
                       static_cast<double>(state_.phase.size());
  if (burning_within(agent_, rc.proximity_radius)) rw.proximity = rc.proximity_bonus;
  if (action != Action::Drop && extinguished == 0) rw.idle_penalty = rc.idle_penalty;
  if (action == Action::Drop && extinguished == 0) rw.waste_penalty = rc.waste_penalty;
  rw.total = sum_terms(rw);

  push_frame();
  log_.actions.push_back(static_cast<std::uint8_t>(action));
  log_.burnt_trajectory.push_back(state_.burnt_count);
  log_.burning_trajectory.push_back(state_.burning_count);
  log_.reward_total += rw.total;
  last_info_ = StepInfo{delta, state_.burnt_count, state_.step};
  record_outcome();

  return StepResult{observation(), rw, done_, last_info_};
}

Observation Environment::observation() const {
  if (!engine_) throw ContractError("observation: call reset first");
  Observation obs;
  for (int i = 0; i < kFrameStack; ++i) obs.frames[i] = ring_[i];
  obs.agent_pos = agent_;
  obs.over_burning = state_.phase[static_cast<std::size_t>(agent_.row) * state_.width +
                                  agent_.col] == Phase::Burning;
  return obs;
}

} // namespace helitack
