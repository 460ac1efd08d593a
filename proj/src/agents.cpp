#include "helitack/agents.hpp"

#include "helitack/error.hpp"
#include "helitack/rng.hpp"
#include "helitack/simd/kernels.hpp"

#include <cstdlib>

namespace helitack {

bool tour_is_closed(int width, int height) {
  return (width % 2 == 0 || height % 2 == 0) && width >= 2 && height >= 2;
}

namespace {

// Rows sweep columns 1..w-1 back and forth; column 0 is the return lane.
std::vector<Cell> closed_tour_even_rows(int width, int height) {
  std::vector<Cell> out;
  out.reserve(static_cast<std::size_t>(width) * height);
  for (int r = 0; r < height; ++r) {
    if (r % 2 == 0) {
      for (int c = 1; c < width; ++c) out.push_back({r, c});
    } else {
      for (int c = width - 1; c >= 1; --c) out.push_back({r, c});
    }
  }
  for (int r = height - 1; r >= 0; --r) out.push_back({r, 0});
  return out;
}

Action move_between(Cell from, Cell to) {
  if (to.row < from.row) return Action::Up;
  if (to.row > from.row) return Action::Down;
  if (to.col < from.col) return Action::Left;
  return Action::Right;
}

} // namespace

std::vector<Cell> serpentine_tour(int width, int height) {
  if (width <= 0 || height <= 0) throw DomainError("serpentine_tour: empty grid");
  if (tour_is_closed(width, height)) {
    if (height % 2 == 0) return closed_tour_even_rows(width, height);
    auto t = closed_tour_even_rows(height, width);
    for (auto& c : t) std::swap(c.row, c.col);
    return t;
  }
  std::vector<Cell> out;
  for (int r = 0; r < height; ++r) {
    for (int i = 0; i < width; ++i) out.push_back({r, r % 2 == 0 ? i : width - 1 - i});
  }
  return out;
}

BlindPatrol::BlindPatrol(std::uint64_t seed, int drop_every)
    : seed_(seed), drop_every_(drop_every) {
  if (drop_every_ < 1) throw ValidationError("blind patrol: drop_every must be >= 1");
}

void BlindPatrol::reset() {
  started_ = false;
  steps_ = 0;
}

Action BlindPatrol::act(const Observation& obs) {
  const Frame& f = *obs.frames[0];
  if (f.width != width_ || f.height != height_) {
    width_ = f.width;
    height_ = f.height;
    closed_ = tour_is_closed(width_, height_);
    tour_ = serpentine_tour(width_, height_);
    tour_index_.assign(static_cast<std::size_t>(width_) * height_, 0);
    for (std::size_t i = 0; i < tour_.size(); ++i) {
      tour_index_[static_cast<std::size_t>(tour_[i].row) * width_ + tour_[i].col] =
          static_cast<std::int32_t>(i);
    }
    started_ = false;
  }
  if (!started_) {
    pos_ = tour_index_[static_cast<std::size_t>(obs.agent_pos.row) * width_ + obs.agent_pos.col];
    Rng rng(seed_);
    dir_ = rng.coin() ? 1 : -1;
    steps_ = 0;
    started_ = true;
  }
  // Every drop_every-th action is a Drop; the rest advance along the tour.
  if (++steps_ % drop_every_ == 0) return Action::Drop;
  const std::size_t n = tour_.size();
  if (n == 1) return Action::Drop;
  std::size_t next;
  if (closed_) {
    next = dir_ > 0 ? (pos_ + 1) % n : (pos_ + n - 1) % n;
  } else {
    if ((dir_ > 0 && pos_ + 1 == n) || (dir_ < 0 && pos_ == 0)) dir_ = -dir_;
    next = dir_ > 0 ? pos_ + 1 : pos_ - 1;
  }
  const Action a = move_between(tour_[pos_], tour_[next]);
  pos_ = next;
  return a;
}

Action step_toward(Cell from, Cell target, double pivot_row, double pivot_col) {
  const int dr = target.row - from.row;
  const int dc = target.col - from.col;
  const Action vertical = dr < 0 ? Action::Up : Action::Down;
  const Action horizontal = dc < 0 ? Action::Left : Action::Right;
  if (std::abs(dr) > std::abs(dc)) return vertical;
  if (std::abs(dc) > std::abs(dr)) return horizontal;
  if (dr == 0) return Action::Up; // already there; caller normally avoids this

  // Tangent (-ry, rx) of the radius vector in x = col, y = -row coordinates.
  const double rx = from.col - pivot_col;
  const double ry = -(from.row - pivot_row);
  const double tx = -ry;
  const double ty = rx;
  const double v = (dr < 0 ? 1.0 : -1.0) * ty;
  const double h = (dc < 0 ? -1.0 : 1.0) * tx;
  return h > v ? horizontal : vertical;
}

PerimeterCircler::PerimeterCircler(int drop_radius, int standoff)
    : drop_radius_(drop_radius), standoff_(standoff) {
  if (drop_radius_ < 0 || standoff_ < 0) {
    throw ValidationError("circler: radius and standoff must be >= 0");
  }
}

Action PerimeterCircler::act(const Observation& obs) {
  const Frame& f = *obs.frames[0];
  const Cell me = obs.agent_pos;
  burning_.resize(f.phase.size());
  const std::size_t count = simd::kernels().collect_equal_f32(f.phase.data(), f.phase.size(),
                                                              kBurningCode, burning_.data());
  if (count == 0) {
    if (last_known_ && *last_known_ != me) return step_toward(me, *last_known_, me.row, me.col);
    return me.row > 0 ? Action::Up : Action::Down;
  }

  // Navigate by the flame front (burning cells touching unburnt fuel); the
  // interior burns out on its own.
  auto on_front = [&](int r, int c) {
    for (int dr = -1; dr <= 1; ++dr) {
      for (int dc = -1; dc <= 1; ++dc) {
        const int rr = r + dr;
        const int cc = c + dc;
        if (rr < 0 || rr >= f.height || cc < 0 || cc >= f.width) continue;
        if (f.phase[static_cast<std::size_t>(rr) * f.width + cc] == kPhaseCodes[0]) return true;
      }
    }
    return false;
  };

  int best = -1;       // nearest burning cell, any
  int best_front = -1; // nearest front cell
  Cell nearest;
  Cell nearest_front;
  double sum_r = 0.0;
  double sum_c = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const int r = static_cast<int>(burning_[i]) / f.width;
    const int c = static_cast<int>(burning_[i]) % f.width;
    sum_r += r;
    sum_c += c;
    const int d = std::max(std::abs(r - me.row), std::abs(c - me.col));
    if (best < 0 || d < best) {
      best = d;
      nearest = {r, c};
    }
    if ((best_front < 0 || d < best_front) && on_front(r, c)) {
      best_front = d;
      nearest_front = {r, c};
    }
  }
  if (best_front >= 0) nearest = nearest_front;
  last_known_ = nearest;
  if (best <= drop_radius_) return Action::Drop;

  const double cr = sum_r / count;
  const double cc = sum_c / count;
  const int out_r = nearest.row > cr ? 1 : (nearest.row < cr ? -1 : 0);
  const int out_c = nearest.col > cc ? 1 : (nearest.col < cc ? -1 : 0);
  Cell target{std::clamp(nearest.row + standoff_ * out_r, 0, f.height - 1),
              std::clamp(nearest.col + standoff_ * out_c, 0, f.width - 1)};
  if (target == me) target = nearest;
  return step_toward(me, target, cr, cc);
}

std::unique_ptr<Policy> make_policy(std::string_view name, std::uint64_t seed, int drop_radius) {
  if (name == "blind") return std::make_unique<BlindPatrol>(seed);
  if (name == "circler") return std::make_unique<PerimeterCircler>(drop_radius);
  return nullptr;
}

} // namespace helitack
