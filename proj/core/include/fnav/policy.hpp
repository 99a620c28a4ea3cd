#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fnav/mapping.hpp"
#include "fnav/planning.hpp"
#include "fnav/world.hpp"

namespace fnav::policy {

struct PromptConfig {
  int max_history_frames = 20;
  std::string letters = "ABCDEFGHIJKLMNOPQRSTUVWXYZ";

  void validate() const;
};

struct Choice {
  std::string letter;
  int frontier_id = -1;
  mapping::ViewRecord view;
  Vec2 waypoint;

  bool operator==(const Choice&) const = default;
};

/// Structured analog of the multimodal prompt: subsampled history, goal, lettered frontier choices.
struct PromptSample {
  world::TaskKind kind = world::TaskKind::ObjectNav;
  std::string instruction;
  std::vector<mapping::ViewRecord> history;
  std::optional<mapping::ViewRecord> imagenav_goal;
  std::vector<Choice> choices;
  std::optional<std::string> answer;

  bool operator==(const PromptSample&) const = default;

  /// Letter of the choice for `frontier_id`; InvalidChoice if absent.
  const std::string& letter_for(int frontier_id) const;
  /// Frontier id behind `letter`; InvalidChoice if absent.
  int frontier_for(const std::string& letter) const;
  bool has_letter(const std::string& letter) const;
};

/// Frame used for the ImageNav goal image; it predates the episode.
inline constexpr int kGoalFrameIndex = -1;

/// round(i * (n - 1) / (m - 1)) for i in [0, m) when n > m; otherwise 0..n-1.
std::vector<std::size_t> subsample_indices(std::size_t n, std::size_t m);

std::string instruction_for(const world::Task& task);

/// Choices follow frontier id order. `frontiers` must be non-empty and so must `history`.
PromptSample build_prompt_sample(std::span<const mapping::ViewRecord> history,
                                 std::span<const mapping::Frontier> frontiers, const world::Task& task,
                                 const mapping::OccupancyGrid& belief, const world::SensorConfig& sensor,
                                 const PromptConfig& cfg = {});

enum class PolicyKind { NearestFrontier, Random, GroundTruthOracle, GreedyOracle, External };

struct PolicySpec {
  PolicyKind kind = PolicyKind::NearestFrontier;
  std::uint64_t seed = 0;
  std::string url;
  int timeout_ms = 5000;
  /// Sends the oracle's letter in a "debug" field; lets an echo server stand in for the oracle.
  bool expose_labels = false;
  planning::OracleConfig oracle;

  std::string name() const;
};

/// "nearest", "random", "random:SEED", "oracle", "greedy", "external:URL".
PolicySpec parse_policy(const std::string& text);

struct PolicyContext {
  const mapping::OccupancyGrid* belief = nullptr;
  world::Pose agent;
  std::span<const mapping::Frontier> frontiers;
  /// Required by the oracle policies and by External with expose_labels.
  const planning::GoalOracle* oracle = nullptr;
};

struct PolicyDecision {
  std::string letter;
  double latency_ms = 0.0;
};

/// Choice with the shortest belief path (Unknown as Free) to its waypoint, ties by frontier id.
/// Falls back to the first choice when none is reachable.
std::string nearest_choice(const PromptSample& sample, const mapping::OccupancyGrid& belief, const world::Pose& agent);

/// Deterministic in (seed, latest history frame).
std::string random_choice(const PromptSample& sample, std::uint64_t seed);

std::string oracle_choice(const PromptSample& sample, const PolicyContext& ctx);

/// External transport and format failures propagate (Timeout, EndpointError, InvalidChoice).
PolicyDecision decide(const PolicySpec& policy, const PromptSample& sample, const PolicyContext& ctx);

// Wire protocol.

/// Request body. `debug_letter`, when set, is sent as {"debug":{"oracle_letter":...}}.
std::string to_wire_json(const PromptSample& sample, const std::optional<std::string>& debug_letter = std::nullopt);
/// Inverse of to_wire_json; the answer is never on the wire. ParseError on malformed input.
PromptSample from_wire_json(const std::string& body);
/// Letter from a {"letter": ...} reply; EndpointError if malformed, InvalidChoice if not offered.
std::string parse_reply(const std::string& body, const PromptSample& sample);

PolicyDecision external_roundtrip(const std::string& url, const PromptSample& sample, int timeout_ms,
                                  const std::optional<std::string>& debug_letter = std::nullopt);

/// Minimal policy server for tests and demos. Replies with the request's debug oracle letter
/// when present, otherwise with `fixed_letter`, otherwise with the first choice.
class StubServer {
 public:
  struct Options {
    std::string host = "127.0.0.1";
    int port = 0;  // 0 picks a free port
    std::optional<std::string> fixed_letter;
    int delay_ms = 0;
    int status = 200;
  };

  explicit StubServer(Options opts);
  StubServer(const StubServer&) = delete;
  StubServer& operator=(const StubServer&) = delete;
  ~StubServer();

  int port() const;
  std::string url() const;
  /// Blocks serving requests; for the standalone tool.
  void run();
  /// Serves on a background thread until stop() or destruction.
  void start();
  void stop();
  std::uint64_t requests() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace fnav::policy
