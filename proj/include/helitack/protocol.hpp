#pragma once

// Newline-delimited JSON control protocol for an Environment. See
// docs/protocol.md for the message reference.

#include "helitack/agents.hpp"
#include "helitack/report.hpp"
#include "helitack/rl_env.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

namespace helitack::protocol {

inline constexpr int kProtocolVersion = 1;

// Error codes carried in {"ok":false,"error":...}.
namespace errc {
inline constexpr std::string_view kMalformed = "malformed";
inline constexpr std::string_view kUnknownCmd = "unknown_cmd";
inline constexpr std::string_view kNotReset = "not_reset";
inline constexpr std::string_view kEpisodeDone = "episode_done";
inline constexpr std::string_view kBadAction = "bad_action";
inline constexpr std::string_view kInvalidScenario = "invalid_scenario";
inline constexpr std::string_view kUnknownAgent = "unknown_agent";
} // namespace errc

class ProtocolError : public std::runtime_error {
public:
  ProtocolError(std::string_view code, const std::string& detail)
      : std::runtime_error(detail), code_(code) {}
  const std::string& code() const noexcept { return code_; }

private:
  std::string code_;
};

struct ResetRequest {
  std::optional<std::string> scenario_path;
  std::optional<std::string> scenario_inline; // compact JSON text of a scenario document
  std::optional<Cell> agent_start;
  std::optional<std::string> agent;
  std::optional<std::uint64_t> seed;
  bool downsample = false;
  friend bool operator==(const ResetRequest&, const ResetRequest&) = default;
};

struct StepRequest {
  std::optional<int> action; // may be omitted when a built-in agent drives
  friend bool operator==(const StepRequest&, const StepRequest&) = default;
};

struct StateRequest {
  friend bool operator==(const StateRequest&, const StateRequest&) = default;
};

struct CloseRequest {
  friend bool operator==(const CloseRequest&, const CloseRequest&) = default;
};

using Request = std::variant<ResetRequest, StepRequest, StateRequest, CloseRequest>;

std::string encode(const Request& r);
// Throws ProtocolError (malformed / unknown_cmd).
Request decode_request(std::string_view line);

struct WireFrame {
  std::vector<float> phase; // values from kPhaseCodes; sent as integer codes 0-3 (value * 3)
  std::vector<float> intensity;
  friend bool operator==(const WireFrame&, const WireFrame&) = default;
};

struct WireObservation {
  int width = 0;
  int height = 0;
  std::array<WireFrame, kFrameStack> frames;
  Cell agent_pos;
  bool over_burning = false;
  friend bool operator==(const WireObservation&, const WireObservation&) = default;
};

WireObservation to_wire(const Observation& obs, bool downsample);

struct WireInfo {
  int newly_ignited = 0;
  int newly_burnt = 0;
  int extinguished = 0;
  int burnt_count = 0;
  int step = 0;
  friend bool operator==(const WireInfo&, const WireInfo&) = default;
};

WireInfo to_wire(const StepInfo& info);

struct Reply {
  bool ok = true;
  std::optional<std::string> error;
  std::optional<std::string> detail;
  std::optional<WireObservation> obs;
  std::optional<RewardBreakdown> reward;
  std::optional<bool> done;
  std::optional<WireInfo> info;
  std::optional<int> action; // the action a built-in agent chose
  std::optional<report::ThreatReport> report;
  bool closed = false;
  friend bool operator==(const Reply&, const Reply&) = default;
};

std::string encode(const Reply& r);
Reply decode_reply(std::string_view line);

Reply error_reply(std::string_view code, const std::string& detail);

struct SessionOptions {
  std::filesystem::path base_dir = "."; // resolves relative scenario_path values
  EnvConfig env;
  report::ReportConfig report;
};

/// One client's view of an environment: decodes a request line, acts, and
/// returns the encoded reply line (without the trailing newline).
class Session {
public:
  Session(std::shared_ptr<const FuelCatalog> catalog, SessionOptions options = {});

  std::string handle(std::string_view line);
  Reply handle(const Request& request);
  bool closed() const { return closed_; }

private:
  Reply on_reset(const ResetRequest& r);
  Reply on_step(const StepRequest& r);
  Reply on_state();
  Reply snapshot(bool include_reward, const RewardBreakdown& reward);

  std::shared_ptr<const FuelCatalog> catalog_;
  SessionOptions options_;
  Environment env_;
  std::unique_ptr<Policy> policy_;
  Observation obs_;
  bool downsample_ = false;
  bool closed_ = false;
  std::map<std::string, std::shared_ptr<const Scenario>> scenario_cache_;
};

} // namespace helitack::protocol
