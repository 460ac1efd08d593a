#include "fixtures.hpp"

#include "helitack/error.hpp"
#include "helitack/rl_env.hpp"

#include <doctest.h>

using namespace helitack;

namespace {

std::shared_ptr<const Scenario> point_fire() {
  static const auto s = std::make_shared<const Scenario>(
      load_scenario_file(testing::data_path("point_fire.json"), *testing::shared_catalog()));
  return s;
}

} // namespace

TEST_CASE("actions map to wire values") {
  CHECK(action_from_int(0) == Action::Up);
  CHECK(action_from_int(4) == Action::Drop);
  CHECK_FALSE(action_from_int(5));
  CHECK_FALSE(action_from_int(-1));
  CHECK(to_string(Action::Right) == "right");
}

TEST_CASE("lifecycle errors") {
  Environment env;
  CHECK_FALSE(env.has_episode());
  CHECK_THROWS_AS(env.step(Action::Up), ContractError);
  CHECK_THROWS_AS(env.reset(point_fire(), testing::shared_catalog(), Cell{24, 0}), ValidationError);
  env.reset(point_fire(), testing::shared_catalog());
  CHECK(env.agent_pos() == Environment::default_start(*point_fire()));
}

TEST_CASE("reset fills the frame stack with the initial frame") {
  Environment env;
  const auto obs = env.reset(point_fire(), testing::shared_catalog());
  for (int k = 1; k < kFrameStack; ++k) CHECK(*obs.frames[k] == *obs.frames[0]);
  const Frame& f = *obs.frames[0];
  CHECK(f.width == 32);
  CHECK(f.height == 24);
  CHECK(f.phase[6 * 32 + 22] == kBurningCode);
  CHECK(f.intensity[6 * 32 + 22] > 0.0f);
  CHECK(f.phase[0] == 0.0f);
}

TEST_CASE("frames shift one slot per step") {
  Environment env;
  env.reset(point_fire(), testing::shared_catalog());
  std::vector<Frame> seen;
  for (int k = 0; k < 6; ++k) {
    const auto r = env.step(Action::Left);
    seen.push_back(*r.obs.frames[0]);
    if (k >= 3) {
      for (int j = 0; j < kFrameStack; ++j) CHECK(*r.obs.frames[j] == seen[seen.size() - 1 - j]);
    }
  }
}

TEST_CASE("movement clamps at the grid edge") {
  Environment env;
  env.reset(point_fire(), testing::shared_catalog(), Cell{0, 0});
  env.step(Action::Up);
  env.step(Action::Left);
  CHECK(env.agent_pos() == Cell{0, 0});
  env.step(Action::Down);
  env.step(Action::Right);
  CHECK(env.agent_pos() == Cell{1, 1});
}

TEST_CASE("reward terms") {
  Environment env;
  env.reset(point_fire(), testing::shared_catalog(), Cell{6, 22});
  auto r = env.step(Action::Drop);
  CHECK(r.info.delta.extinguished == 1);
  CHECK(r.reward.extinguish == 1.0);
  CHECK(r.reward.waste_penalty == 0.0);
  CHECK(r.reward.idle_penalty == 0.0);
  CHECK(r.reward.total == sum_terms(r.reward));
  CHECK(r.done);
  CHECK(env.log().drops.size() == 1);
  CHECK(env.log().drops[0].step == 0);
  CHECK_THROWS_AS(env.step(Action::Up), ContractError);

  env.reset(point_fire(), testing::shared_catalog(), Cell{20, 2});
  r = env.step(Action::Drop);
  CHECK(r.reward.waste_penalty == -0.05);
  CHECK(r.reward.proximity == 0.0);
  r = env.step(Action::Up);
  CHECK(r.reward.idle_penalty == -0.005);
  CHECK(r.reward.total == sum_terms(r.reward));
}

TEST_CASE("proximity bonus and over_burning flag") {
  Environment env;
  auto obs = env.reset(point_fire(), testing::shared_catalog(), Cell{6, 21});
  CHECK_FALSE(obs.over_burning);
  auto r = env.step(Action::Right);
  CHECK(r.obs.over_burning);
  CHECK(r.reward.proximity == 0.01);
}

TEST_CASE("reset reuses the engine for the same scenario") {
  Environment env;
  env.reset(point_fire(), testing::shared_catalog());
  const Engine* first = &env.engine();
  env.step(Action::Up);
  env.reset(point_fire(), testing::shared_catalog());
  CHECK(&env.engine() == first);
  CHECK(env.state().step == 0);
  CHECK(env.log().actions.empty());
}

TEST_CASE("downsample halves each side with max pooling") {
  Environment env;
  const auto obs = env.reset(point_fire(), testing::shared_catalog());
  const Frame d = downsample2x(*obs.frames[0]);
  CHECK(d.width == 16);
  CHECK(d.height == 12);
  CHECK(d.phase[3 * 16 + 11] == kBurningCode);
}
