#include "helitack/protocol.hpp"

#include "helitack/error.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>

namespace helitack::protocol {

using nlohmann::json;

namespace {

// Floats travel as their shortest decimal form and come back bit-exact.
json float_to_json(float f) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, f);
  double d = 0.0;
  std::from_chars(buf, r.ptr, d);
  return d;
}

float float_from_json(const json& j) {
  if (!j.is_number()) throw ProtocolError(errc::kMalformed, "expected a number");
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, j.get<double>());
  float f = 0.0f;
  std::from_chars(buf, r.ptr, f);
  return f;
}

json rle_phase(const std::vector<float>& v) {
  json out = json::array();
  std::size_t i = 0;
  while (i < v.size()) {
    std::size_t j = i;
    while (j < v.size() && v[j] == v[i]) ++j;
    out.push_back(std::lround(v[i] * 3.0f));
    out.push_back(j - i);
    i = j;
  }
  return out;
}

json rle_values(const std::vector<float>& v) {
  json out = json::array();
  std::size_t i = 0;
  while (i < v.size()) {
    std::size_t j = i;
    while (j < v.size() && v[j] == v[i]) ++j;
    out.push_back(float_to_json(v[i]));
    out.push_back(j - i);
    i = j;
  }
  return out;
}

template <typename F>
std::vector<float> unrle(const json& runs, std::size_t expected, F value_of) {
  if (!runs.is_array() || runs.size() % 2 != 0) {
    throw ProtocolError(errc::kMalformed, "run-length array must hold value/count pairs");
  }
  std::vector<float> out;
  out.reserve(expected);
  for (std::size_t i = 0; i < runs.size(); i += 2) {
    const float v = value_of(runs[i]);
    if (!runs[i + 1].is_number_unsigned()) throw ProtocolError(errc::kMalformed, "bad run length");
    const auto n = runs[i + 1].get<std::size_t>();
    if (out.size() + n > expected) throw ProtocolError(errc::kMalformed, "runs overflow the grid");
    out.insert(out.end(), n, v);
  }
  if (out.size() != expected) throw ProtocolError(errc::kMalformed, "runs do not cover the grid");
  return out;
}

float phase_from_code(const json& j) {
  if (!j.is_number_integer()) throw ProtocolError(errc::kMalformed, "phase code must be an integer");
  const int k = j.get<int>();
  if (k < 0 || k > 3) throw ProtocolError(errc::kMalformed, "phase code out of range");
  return static_cast<float>(k) / 3.0f;
}

const json& field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ProtocolError(errc::kMalformed, std::string("missing '") + key + "'");
  return *it;
}

template <typename T>
T as(const json& j, const char* what) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ProtocolError(errc::kMalformed, std::string("'") + what + "' has the wrong type");
  }
}

json obs_to_json(const WireObservation& o) {
  json frames = json::array();
  for (const auto& f : o.frames) {
    frames.push_back({{"phase", rle_phase(f.phase)}, {"intensity", rle_values(f.intensity)}});
  }
  return {{"width", o.width},
          {"height", o.height},
          {"frames", frames},
          {"agent_pos", {o.agent_pos.row, o.agent_pos.col}},
          {"over_burning", o.over_burning}};
}

WireObservation obs_from_json(const json& j) {
  WireObservation o;
  o.width = as<int>(field(j, "width"), "width");
  o.height = as<int>(field(j, "height"), "height");
  if (o.width < 0 || o.height < 0) throw ProtocolError(errc::kMalformed, "negative grid size");
  const std::size_t n = static_cast<std::size_t>(o.width) * o.height;
  const json& frames = field(j, "frames");
  if (!frames.is_array() || frames.size() != kFrameStack) {
    throw ProtocolError(errc::kMalformed, "expected 4 frames");
  }
  for (int k = 0; k < kFrameStack; ++k) {
    o.frames[k].phase = unrle(field(frames[k], "phase"), n, phase_from_code);
    o.frames[k].intensity = unrle(field(frames[k], "intensity"), n, float_from_json);
  }
  const auto pos = as<std::vector<int>>(field(j, "agent_pos"), "agent_pos");
  if (pos.size() != 2) throw ProtocolError(errc::kMalformed, "agent_pos needs [row, col]");
  o.agent_pos = {pos[0], pos[1]};
  o.over_burning = as<bool>(field(j, "over_burning"), "over_burning");
  return o;
}

json reward_to_json(const RewardBreakdown& r) {
  return {{"extinguish", r.extinguish},       {"containment", r.containment},
          {"proximity", r.proximity},         {"idle_penalty", r.idle_penalty},
          {"waste_penalty", r.waste_penalty}, {"total", r.total}};
}

RewardBreakdown reward_from_json(const json& j) {
  return {as<double>(field(j, "extinguish"), "extinguish"),
          as<double>(field(j, "containment"), "containment"),
          as<double>(field(j, "proximity"), "proximity"),
          as<double>(field(j, "idle_penalty"), "idle_penalty"),
          as<double>(field(j, "waste_penalty"), "waste_penalty"),
          as<double>(field(j, "total"), "total")};
}

} // namespace

std::string encode(const Request& r) {
  json j;
  if (const auto* reset = std::get_if<ResetRequest>(&r)) {
    j["cmd"] = "reset";
    if (reset->scenario_path) j["scenario_path"] = *reset->scenario_path;
    if (reset->scenario_inline) j["scenario_inline"] = json::parse(*reset->scenario_inline);
    if (reset->agent_start) j["agent_start"] = {reset->agent_start->row, reset->agent_start->col};
    if (reset->agent) j["agent"] = *reset->agent;
    if (reset->seed) j["seed"] = *reset->seed;
    if (reset->downsample) j["downsample"] = true;
  } else if (const auto* step = std::get_if<StepRequest>(&r)) {
    j["cmd"] = "step";
    if (step->action) j["action"] = *step->action;
  } else if (std::holds_alternative<StateRequest>(r)) {
    j["cmd"] = "state";
  } else {
    j["cmd"] = "close";
  }
  return j.dump();
}

Request decode_request(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ProtocolError(errc::kMalformed, e.what());
  }
  if (!j.is_object()) throw ProtocolError(errc::kMalformed, "request must be an object");
  const std::string cmd = as<std::string>(field(j, "cmd"), "cmd");
  if (cmd == "reset") {
    ResetRequest r;
    if (j.contains("scenario_path")) r.scenario_path = as<std::string>(j["scenario_path"], "scenario_path");
    if (j.contains("scenario_inline")) {
      if (!j["scenario_inline"].is_object()) {
        throw ProtocolError(errc::kMalformed, "'scenario_inline' must be an object");
      }
      r.scenario_inline = j["scenario_inline"].dump();
    }
    if (j.contains("agent_start")) {
      const auto pos = as<std::vector<int>>(j["agent_start"], "agent_start");
      if (pos.size() != 2) throw ProtocolError(errc::kMalformed, "agent_start needs [row, col]");
      r.agent_start = Cell{pos[0], pos[1]};
    }
    if (j.contains("agent")) r.agent = as<std::string>(j["agent"], "agent");
    if (j.contains("seed")) r.seed = as<std::uint64_t>(j["seed"], "seed");
    if (j.contains("downsample")) r.downsample = as<bool>(j["downsample"], "downsample");
    return r;
  }
  if (cmd == "step") {
    StepRequest r;
    if (j.contains("action")) {
      if (!j["action"].is_number_integer()) throw ProtocolError(errc::kBadAction, "action must be an integer");
      r.action = j["action"].get<int>();
    }
    return r;
  }
  if (cmd == "state") return StateRequest{};
  if (cmd == "close") return CloseRequest{};
  throw ProtocolError(errc::kUnknownCmd, "unknown cmd '" + cmd + "'");
}

WireObservation to_wire(const Observation& obs, bool downsample) {
  WireObservation w;
  for (int k = 0; k < kFrameStack; ++k) {
    const Frame& f = *obs.frames[k];
    if (downsample) {
      Frame d = downsample2x(f);
      w.width = d.width;
      w.height = d.height;
      w.frames[k] = {std::move(d.phase), std::move(d.intensity)};
    } else {
      w.width = f.width;
      w.height = f.height;
      w.frames[k] = {f.phase, f.intensity};
    }
  }
  w.agent_pos = obs.agent_pos;
  w.over_burning = obs.over_burning;
  return w;
}

WireInfo to_wire(const StepInfo& info) {
  return {info.delta.newly_ignited, info.delta.newly_burnt, info.delta.extinguished,
          info.burnt_count, info.step};
}

std::string encode(const Reply& r) {
  json j;
  j["ok"] = r.ok;
  if (r.error) j["error"] = *r.error;
  if (r.detail) j["detail"] = *r.detail;
  if (r.obs) j["obs"] = obs_to_json(*r.obs);
  if (r.reward) j["reward"] = reward_to_json(*r.reward);
  if (r.done) j["done"] = *r.done;
  if (r.info) {
    j["info"] = {{"newly_ignited", r.info->newly_ignited}, {"newly_burnt", r.info->newly_burnt},
                 {"extinguished", r.info->extinguished},   {"burnt_count", r.info->burnt_count},
                 {"step", r.info->step}};
  }
  if (r.action) j["action"] = *r.action;
  if (r.report) j["report"] = json::parse(report::render_structured(*r.report));
  if (r.closed) j["closed"] = true;
  return j.dump();
}

Reply decode_reply(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ProtocolError(errc::kMalformed, e.what());
  }
  if (!j.is_object()) throw ProtocolError(errc::kMalformed, "reply must be an object");
  Reply r;
  r.ok = as<bool>(field(j, "ok"), "ok");
  if (j.contains("error")) r.error = as<std::string>(j["error"], "error");
  if (j.contains("detail")) r.detail = as<std::string>(j["detail"], "detail");
  if (j.contains("obs")) r.obs = obs_from_json(j["obs"]);
  if (j.contains("reward")) r.reward = reward_from_json(j["reward"]);
  if (j.contains("done")) r.done = as<bool>(j["done"], "done");
  if (j.contains("info")) {
    const json& i = j["info"];
    r.info = WireInfo{as<int>(field(i, "newly_ignited"), "newly_ignited"),
                      as<int>(field(i, "newly_burnt"), "newly_burnt"),
                      as<int>(field(i, "extinguished"), "extinguished"),
                      as<int>(field(i, "burnt_count"), "burnt_count"),
                      as<int>(field(i, "step"), "step")};
  }
  if (j.contains("action")) r.action = as<int>(j["action"], "action");
  if (j.contains("report")) {
    try {
      r.report = report::parse_structured(j["report"].dump());
    } catch (const ParseError& e) {
      throw ProtocolError(errc::kMalformed, e.what());
    }
  }
  if (j.contains("closed")) r.closed = as<bool>(j["closed"], "closed");
  return r;
}

Reply error_reply(std::string_view code, const std::string& detail) {
  Reply r;
  r.ok = false;
  r.error = std::string(code);
  if (!detail.empty()) r.detail = detail;
  return r;
}

Session::Session(std::shared_ptr<const FuelCatalog> catalog, SessionOptions options)
    : catalog_(std::move(catalog)), options_(std::move(options)), env_(options_.env) {}

std::string Session::handle(std::string_view line) {
  Reply reply;
  try {
    reply = handle(decode_request(line));
  } catch (const ProtocolError& e) {
    reply = error_reply(e.code(), e.what());
  }
  return encode(reply);
}

Reply Session::handle(const Request& request) {
  try {
    if (const auto* r = std::get_if<ResetRequest>(&request)) return on_reset(*r);
    if (const auto* r = std::get_if<StepRequest>(&request)) return on_step(*r);
    if (std::holds_alternative<StateRequest>(request)) return on_state();
    closed_ = true;
    Reply r;
    r.closed = true;
    return r;
  } catch (const ProtocolError& e) {
    return error_reply(e.code(), e.what());
  }
}

Reply Session::snapshot(bool include_reward, const RewardBreakdown& reward) {
  Reply r;
  r.obs = to_wire(obs_, downsample_);
  if (include_reward) r.reward = reward;
  r.done = env_.done();
  r.info = to_wire(env_.last_info());
  if (env_.done()) r.report = report::build_report(env_.log(), options_.report);
  return r;
}

Reply Session::on_reset(const ResetRequest& req) {
  if (req.scenario_path.has_value() == req.scenario_inline.has_value()) {
    throw ProtocolError(errc::kMalformed, "reset needs exactly one of scenario_path, scenario_inline");
  }
  std::shared_ptr<const Scenario> scenario;
  try {
    if (req.scenario_path) {
      const std::filesystem::path p = options_.base_dir / *req.scenario_path;
      const std::string key = p.lexically_normal().string();
      auto it = scenario_cache_.find(key);
      if (it == scenario_cache_.end()) {
        it = scenario_cache_
                 .emplace(key, std::make_shared<const Scenario>(load_scenario_file(p, *catalog_)))
                 .first;
      }
      scenario = it->second;
    } else {
      scenario = std::make_shared<const Scenario>(
          load_scenario(*req.scenario_inline, *catalog_, options_.base_dir));
    }
  } catch (const ParseError& e) {
    throw ProtocolError(errc::kInvalidScenario, e.what());
  } catch (const ValidationError& e) {
    throw ProtocolError(errc::kInvalidScenario, e.what());
  }

  std::unique_ptr<Policy> policy;
  if (req.agent) {
    policy = make_policy(*req.agent, req.seed.value_or(scenario->seed), options_.env.drop_radius);
    if (!policy) throw ProtocolError(errc::kUnknownAgent, "unknown agent '" + *req.agent + "'");
  }
  try {
    obs_ = env_.reset(scenario, catalog_, req.agent_start);
  } catch (const ValidationError& e) {
    throw ProtocolError(errc::kInvalidScenario, e.what());
  }
  policy_ = std::move(policy);
  downsample_ = req.downsample;
  return snapshot(false, {});
}

Reply Session::on_step(const StepRequest& req) {
  if (!env_.has_episode()) throw ProtocolError(errc::kNotReset, "send reset first");
  if (env_.done()) throw ProtocolError(errc::kEpisodeDone, "episode finished; send reset");
  Action action;
  bool chosen = false;
  if (req.action) {
    const auto a = action_from_int(*req.action);
    if (!a) throw ProtocolError(errc::kBadAction, "action must be 0-4");
    action = *a;
  } else if (policy_) {
    action = policy_->act(obs_);
    chosen = true;
  } else {
    throw ProtocolError(errc::kBadAction, "action required when no agent is attached");
  }
  const StepResult res = env_.step(action);
  obs_ = res.obs;
  Reply r = snapshot(true, res.reward);
  if (chosen) r.action = static_cast<int>(action);
  return r;
}

Reply Session::on_state() {
  if (!env_.has_episode()) throw ProtocolError(errc::kNotReset, "send reset first");
  return snapshot(false, {});
}

} // namespace helitack::protocol
