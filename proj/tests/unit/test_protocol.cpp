#include "fixtures.hpp"

#include "helitack/protocol.hpp"

#include <doctest.h>
#include <json.hpp>

#include <sstream>

#include "helitack/serve.hpp"

using namespace helitack;
using namespace helitack::protocol;

namespace {

protocol::SessionOptions data_dir() {
  SessionOptions o;
  o.base_dir = HELITACK_TEST_DATA;
  return o;
}

float random_float(Rng& rng) {
  switch (rng.below(4)) {
  case 0: return 0.0f;
  case 1: return kPhaseCodes[rng.below(4)];
  case 2: return static_cast<float>(rng.uniform());
  default: return std::nextafter(static_cast<float>(rng.uniform()), 2.0f);
  }
}

} // namespace

TEST_CASE("requests round-trip") {
  ResetRequest r;
  r.scenario_path = "point_fire.json";
  r.agent_start = Cell{3, 4};
  r.agent = "circler";
  r.seed = 12;
  r.downsample = true;
  for (const Request& req : std::vector<Request>{r, ResetRequest{}, StepRequest{2}, StepRequest{},
                                                 StateRequest{}, CloseRequest{}}) {
    CHECK(decode_request(encode(req)) == req);
  }
}

TEST_CASE("replies round-trip including bit-exact floats") {
  Rng rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    Reply rep;
    WireObservation obs;
    obs.width = static_cast<int>(rng.between(1, 9));
    obs.height = static_cast<int>(rng.between(1, 9));
    const std::size_t n = static_cast<std::size_t>(obs.width) * obs.height;
    for (auto& f : obs.frames) {
      for (std::size_t i = 0; i < n; ++i) {
        f.phase.push_back(kPhaseCodes[rng.below(4)]);
        f.intensity.push_back(random_float(rng));
      }
    }
    obs.agent_pos = {static_cast<int>(rng.below(obs.height)), static_cast<int>(rng.below(obs.width))};
    obs.over_burning = rng.coin();
    rep.obs = obs;
    RewardBreakdown rw{rng.uniform(), rng.uniform(-1, 0), 0.01, -0.005, 0.0, 0.0};
    rw.total = sum_terms(rw);
    rep.reward = rw;
    rep.done = rng.coin();
    rep.info = WireInfo{1, 2, 3, 4, 5};
    if (rng.coin()) rep.action = 4;
    CHECK(decode_reply(encode(rep)) == rep);
  }
  const Reply err = error_reply(errc::kBadAction, "action must be 0-4");
  CHECK(decode_reply(encode(err)) == err);
}

TEST_CASE("malformed and unknown requests") {
  Session s(testing::shared_catalog(), data_dir());
  auto code = [&](std::string_view line) {
    const auto j = nlohmann::json::parse(s.handle(line));
    return j.value("error", std::string("ok"));
  };
  CHECK(code("{not json") == errc::kMalformed);
  CHECK(code("{\"cmd\":\"fly\"}") == errc::kUnknownCmd);
  CHECK(code("{\"cmd\":\"step\",\"action\":1}") == errc::kNotReset);
  CHECK(code("{\"cmd\":\"reset\",\"scenario_path\":\"missing.json\"}") == errc::kInvalidScenario);
  CHECK(code("{\"cmd\":\"reset\",\"scenario_path\":\"point_fire.json\",\"agent\":\"ppo\"}") == errc::kUnknownAgent);
  CHECK(code("{\"cmd\":\"reset\",\"scenario_path\":\"point_fire.json\"}") == "ok");
  CHECK(code("{\"cmd\":\"step\",\"action\":7}") == errc::kBadAction);
  CHECK(code("{\"cmd\":\"step\",\"action\":\"up\"}") == errc::kBadAction);
  CHECK(code("{\"cmd\":\"step\"}") == errc::kBadAction);
  CHECK(code("{\"cmd\":\"state\"}") == "ok");
}

TEST_CASE("inline scenario and built-in agent") {
  Session s(testing::shared_catalog(), data_dir());
  const auto doc = nlohmann::json::parse(testing::read_text(testing::data_path("point_fire.json")));
  nlohmann::json req = {{"cmd", "reset"}, {"scenario_inline", doc}, {"agent", "circler"}};
  auto rep = decode_reply(s.handle(req.dump()));
  REQUIRE(rep.ok);
  CHECK(rep.obs->width == 32);
  bool done = false;
  int steps = 0;
  while (!done && steps < 500) {
    rep = decode_reply(s.handle("{\"cmd\":\"step\"}"));
    REQUIRE(rep.ok);
    CHECK(rep.action.has_value());
    done = *rep.done;
    ++steps;
  }
  CHECK(done);
  CHECK(rep.report.has_value());
  const auto after = nlohmann::json::parse(s.handle("{\"cmd\":\"step\"}"));
  CHECK(after["error"] == errc::kEpisodeDone);
}

TEST_CASE("golden transcript") {
  Session s(testing::shared_catalog(), data_dir());
  std::istringstream in(testing::read_text(testing::data_path("transcript_requests.jsonl")));
  std::ostringstream out;
  serve::serve_stream(s, in, out);
  CHECK(out.str() == testing::read_text(testing::data_path("transcript_golden.jsonl")));
  CHECK(s.closed());
}
