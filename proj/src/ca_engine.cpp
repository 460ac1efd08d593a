#include "helitack/ca_engine.hpp"

#include "helitack/error.hpp"
#include "helitack/rothermel.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstring>
#include <map>
#include <numbers>

namespace helitack {

namespace {

// Anderson model 1 load, the reference for burn duration.
constexpr double kReferenceLoad = 0.74 * kTonsPerAcreToLbPerSqFt;

} // namespace

Engine::Engine(std::shared_ptr<const Scenario> scenario, std::shared_ptr<const FuelCatalog> catalog)
    : scenario_(std::move(scenario)), catalog_(std::move(catalog)) {
  const Scenario& s = *scenario_;
  validate(s, *catalog_);
  for (std::size_t i = 0; i < s.ignitions.size(); ++i) {
    const auto& ig = s.ignitions[i];
    if (!catalog_->is_burnable(s.fuel_code[s.index({ig.row, ig.col})])) {
      throw ValidationError("ignitions[" + std::to_string(i) + "]: cell (" +
                            std::to_string(ig.row) + ", " + std::to_string(ig.col) +
                            ") is nonburnable");
    }
  }
  schedule_ = s.ignitions;
  std::stable_sort(schedule_.begin(), schedule_.end(),
                   [](const Ignition& a, const Ignition& b) { return a.step < b.step; });

  struct FuelTerms {
    rothermel::FuelBedTerms bed;
    double phi_w[8];
  };
  const double wind_speed = s.wind_speed_ft_min();
  const double wind_dir = s.wind_dir_rad();
  double spread_dir[8];
  double distance_ft[8];
  const double cell_ft = s.cell_size_m * kFeetPerMeter;
  for (int k = 0; k < 8; ++k) {
    const int dr = kNeighbourOffsets[k][0];
    const int dc = kNeighbourOffsets[k][1];
    spread_dir[k] = std::atan2(static_cast<double>(-dr), static_cast<double>(dc));
    distance_ft[k] = (dr != 0 && dc != 0) ? cell_ft * std::numbers::sqrt2 : cell_ft;
  }

  std::map<int, FuelTerms> terms;
  for (const auto& [id, model] : catalog_->entries()) {
    FuelTerms t{rothermel::fuel_bed_terms(model, s.moisture), {}};
    for (int k = 0; k < 8; ++k) {
      t.phi_w[k] = rothermel::wind_factor(t.bed, wind_speed, wind_dir, spread_dir[k]);
    }
    terms.emplace(id, t);
  }

  const std::size_t n = s.cell_count();
  burn_steps_.assign(n, 0);
  ignite_intensity_.assign(n, 0.0f);
  for (std::size_t i = 0; i < n; ++i) {
    const int code = s.fuel_code[i];
    if (!catalog_->is_burnable(code)) continue;
    const FuelModel& m = catalog_->at(code);
    burn_steps_[i] = std::max(1, static_cast<int>(std::ceil(kBurnSteps * m.w0 / kReferenceLoad)));
    const double scaled = terms.at(code).bed.i_r / kIntensityRef;
    ignite_intensity_[i] = std::clamp(static_cast<float>(scaled), kMinIntensity, 1.0f);
  }

  increments_.assign(n * 8, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const Cell from = s.cell_at(i);
    for (int k = 0; k < 8; ++k) {
      const Cell to{from.row + kNeighbourOffsets[k][0], from.col + kNeighbourOffsets[k][1]};
      if (!s.in_bounds(to)) continue;
      const std::size_t j = s.index(to);
      if (burn_steps_[j] == 0) continue;
      const FuelTerms& t = terms.at(s.fuel_code[j]);
      const double phi_s = rothermel::slope_factor(t.bed, slope_between(s, from, to));
      const double r_eff = rothermel::effective_rate(t.bed.r_base, t.phi_w[k], phi_s);
      increments_[i * 8 + k] = std::llround(r_eff * kStepMinutes / distance_ft[k] * kArrivalScale);
    }
  }
}

void Engine::ignite(SimState& state, std::size_t i) const {
  state.phase[i] = Phase::Burning;
  state.burn_remaining[i] = burn_steps_[i];
  state.intensity[i] = ignite_intensity_[i];
  state.frontier.push_back(static_cast<std::uint32_t>(i));
  ++state.burning_count;
}

void Engine::apply_scheduled(SimState& state, StepDelta* delta) const {
  while (state.next_ignition < schedule_.size() &&
         schedule_[state.next_ignition].step <= state.step) {
    const auto& ig = schedule_[state.next_ignition++];
    if (ig.step != state.step) continue;
    const std::size_t i = scenario_->index({ig.row, ig.col});
    if (state.phase[i] != Phase::Unburnt) continue;
    ignite(state, i);
    if (delta) ++delta->newly_ignited;
  }
}

SimState Engine::init() const {
  const Scenario& s = *scenario_;
  const std::size_t n = s.cell_count();
  SimState state;
  state.width = s.width;
  state.height = s.height;
  state.phase.assign(n, Phase::Unburnt);
  state.intensity.assign(n, 0.0f);
  state.arrival_fx.assign(n, 0);
  state.burn_remaining.assign(n, 0);
  state.rng = Rng(s.seed);
  apply_scheduled(state, nullptr);
  return state;
}

StepDelta Engine::step(SimState& state) const {
  if (state.step >= scenario_->max_steps) {
    throw ContractError("step: episode already reached max_steps");
  }
#ifndef NDEBUG
  const std::vector<Phase> before = state.phase;
#endif
  const int width = state.width;
  const int height = state.height;
  StepDelta delta;

  // Spread: accumulate arrival into unburnt neighbours of every burning cell.
  std::vector<std::uint32_t> ignited;
  for (const std::uint32_t b : state.frontier) {
    const int row = static_cast<int>(b) / width;
    const int col = static_cast<int>(b) % width;
    for (int k = 0; k < 8; ++k) {
      const std::int64_t inc = increments_[static_cast<std::size_t>(b) * 8 + k];
      if (inc == 0) continue;
      const int r = row + kNeighbourOffsets[k][0];
      const int c = col + kNeighbourOffsets[k][1];
      if (r < 0 || r >= height || c < 0 || c >= width) continue;
      const std::size_t n = static_cast<std::size_t>(r) * width + c;
      if (state.phase[n] != Phase::Unburnt) continue;
      const std::int64_t old = state.arrival_fx[n];
      state.arrival_fx[n] = old + inc;
      if (old < kArrivalThreshold && old + inc >= kArrivalThreshold) {
        ignited.push_back(static_cast<std::uint32_t>(n));
      }
    }
  }

  // Burn down the current frontier.
  std::vector<std::uint32_t> next;
  next.reserve(state.frontier.size() + ignited.size());
  for (const std::uint32_t b : state.frontier) {
    if (--state.burn_remaining[b] <= 0) {
      state.burn_remaining[b] = 0;
      state.phase[b] = Phase::Burnt;
      state.intensity[b] = 0.0f;
      --state.burning_count;
      ++state.burnt_count;
      ++delta.newly_burnt;
    } else {
      next.push_back(b);
    }
  }
  state.frontier.swap(next);

  for (const std::uint32_t n : ignited) {
    ignite(state, n);
    ++delta.newly_ignited;
  }

  ++state.step;
  apply_scheduled(state, &delta);

#ifndef NDEBUG
  for (std::size_t i = 0; i < before.size(); ++i) {
    assert(transition_allowed(before[i], state.phase[i]));
  }
#endif
  return delta;
}

int Engine::apply_suppressant(SimState& state, Cell center, int radius) const {
  if (!scenario_->in_bounds(center)) throw DomainError("apply_suppressant: center out of bounds");
  if (radius < 0) throw DomainError("apply_suppressant: radius must be >= 0");
  const int r0 = std::max(0, center.row - radius);
  const int r1 = std::min(state.height - 1, center.row + radius);
  const int c0 = std::max(0, center.col - radius);
  const int c1 = std::min(state.width - 1, center.col + radius);

  int extinguished = 0;
  for (int r = r0; r <= r1; ++r) {
    for (int c = c0; c <= c1; ++c) {
      const std::size_t i = static_cast<std::size_t>(r) * state.width + c;
      const Phase p = state.phase[i];
      if (p != Phase::Unburnt && p != Phase::Burning) continue;
      if (p == Phase::Burning) {
        ++extinguished;
        --state.burning_count;
      }
      state.phase[i] = Phase::Suppressed;
      state.intensity[i] = 0.0f;
      state.arrival_fx[i] = 0;
      state.burn_remaining[i] = 0;
    }
  }
  if (extinguished > 0) {
    std::erase_if(state.frontier,
                  [&](std::uint32_t i) { return state.phase[i] != Phase::Burning; });
  }
  return extinguished;
}

Outcome Engine::is_finished(const SimState& state) const {
  const bool pending = state.next_ignition < schedule_.size();
  if (state.burning_count == 0 && !pending) return {Outcome::Kind::ContainedAt, state.step};
  if (state.step >= scenario_->max_steps) return {Outcome::Kind::MaxStepsReached, state.step};
  return {Outcome::Kind::Active, state.step};
}

std::vector<std::uint32_t> recompute_frontier(const SimState& state) {
  std::vector<std::uint32_t> out;
  for (std::size_t i = 0; i < state.phase.size(); ++i) {
    if (state.phase[i] == Phase::Burning) out.push_back(static_cast<std::uint32_t>(i));
  }
  return out;
}

std::uint64_t checksum(const SimState& state) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= p[i];
      h *= 1099511628211ULL;
    }
  };
  mix(&state.step, sizeof state.step);
  mix(state.phase.data(), state.phase.size());
  mix(state.intensity.data(), state.intensity.size() * sizeof(float));
  mix(state.arrival_fx.data(), state.arrival_fx.size() * sizeof(std::int64_t));
  mix(state.burn_remaining.data(), state.burn_remaining.size() * sizeof(std::int32_t));
  mix(state.frontier.data(), state.frontier.size() * sizeof(std::uint32_t));
  mix(&state.next_ignition, sizeof state.next_ignition);
  return h;
}

} // namespace helitack
