#pragma once

#include "helitack/rl_env.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

namespace helitack {

class Policy {
public:
  virtual ~Policy() = default;
  virtual std::string_view name() const = 0;
  // Forget everything remembered from the previous episode.
  virtual void reset() = 0;
  virtual Action act(const Observation& obs) = 0;
};

/// Closed serpentine tour of the grid: consecutive cells (and last->first) are
/// 4-adjacent and every cell appears once. Needs an even dimension; for odd x
/// odd grids this returns an open serpentine path instead.
std::vector<Cell> serpentine_tour(int width, int height);
bool tour_is_closed(int width, int height);

/// Fire-blind sweep along the serpentine tour. Every `drop_every`-th action
/// is a Drop; the others are moves. Reads only the grid size and its own
/// start position.
class BlindPatrol final : public Policy {
public:
  explicit BlindPatrol(std::uint64_t seed = 0, int drop_every = 8);

  std::string_view name() const override { return "blind"; }
  void reset() override;
  Action act(const Observation& obs) override;

private:
  std::uint64_t seed_;
  int drop_every_;
  int width_ = 0;
  int height_ = 0;
  bool closed_ = true;
  std::vector<Cell> tour_;
  std::vector<std::int32_t> tour_index_; // cell -> position in tour_
  bool started_ = false;
  std::size_t pos_ = 0;
  int dir_ = 1;
  long steps_ = 0;
};

/// Drops whenever the footprint covers fire; otherwise heads for a standoff
/// point just outside the nearest burning cell, breaking ties counterclockwise
/// around the fire's centroid.
class PerimeterCircler final : public Policy {
public:
  explicit PerimeterCircler(int drop_radius = 2, int standoff = 1);

  std::string_view name() const override { return "circler"; }
  void reset() override { last_known_.reset(); }
  Action act(const Observation& obs) override;

private:
  int drop_radius_;
  int standoff_;
  std::optional<Cell> last_known_;
  std::vector<std::uint32_t> burning_;
};

// Greedy 4-neighbour move reducing Chebyshev distance to target. When the row
// and column gaps tie, prefers the move along the counterclockwise tangent
// about `pivot` (col, row coordinates, north up).
Action step_toward(Cell from, Cell target, double pivot_row, double pivot_col);

// "blind" or "circler"; nullptr for unknown names.
std::unique_ptr<Policy> make_policy(std::string_view name, std::uint64_t seed = 0,
                                    int drop_radius = 2);

} // namespace helitack
