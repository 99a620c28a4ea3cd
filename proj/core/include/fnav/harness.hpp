#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fnav/mapping.hpp"
#include "fnav/planning.hpp"
#include "fnav/policy.hpp"
#include "fnav/world.hpp"

namespace fnav::harness {

struct ReplanTrigger {
  enum class Mode { OnChangeOrArrival, EveryStep, EveryNSteps };
  Mode mode = Mode::OnChangeOrArrival;
  int n = 1;

  std::string to_string() const;
};

/// "arrival", "step" or "n:K".
ReplanTrigger parse_replan(const std::string& text);

struct RuntimeConfig {
  world::SensorConfig sensor;
  world::ActionConfig action;
  planning::ControllerConfig controller;
  policy::PromptConfig prompt;
  ReplanTrigger replan;
  int min_frontier_cells = 3;
  /// Distance at which the chosen waypoint counts as reached.
  double arrival_tolerance = 0.25;
  bool detection = true;
  /// Success measured by geodesic instead of Euclidean distance to the goal.
  bool geodesic_success = false;
  int max_consecutive_stuck = 3;
  /// Distance to the detected goal at which Stop is issued; the episode's success radius if unset.
  std::optional<double> stop_radius;
  std::optional<std::filesystem::path> snapshot_dir;

  void validate() const;
  /// Stable text form, hashed into reports.
  std::string describe() const;
};

enum class Termination { StoppedSuccess, StoppedFar, Timeout, Stuck };

std::string_view to_string(Termination t);

struct DecisionLog {
  int step = 0;
  std::string letter;
  int frontier_id = -1;
  std::vector<int> offered;  // frontier ids behind the letters, in letter order
  bool fallback = false;
  std::string note;
};

struct EpisodeResult {
  std::string episode_id;
  bool success = false;
  double agent_path_length = 0.0;
  double shortest_path_length = 0.0;
  int steps = 0;
  Termination termination = Termination::Timeout;
  std::vector<DecisionLog> decisions;
  std::vector<world::Action> actions;
  int collisions = 0;
  int fallbacks = 0;
  /// Set when the episode could not run at all; the result then counts as a failure.
  std::string error;

  /// S_i * L_i / max(P_i, L_i).
  double spl_term() const;
};

/// State handed to an observer each time the policy is consulted.
struct DecisionPoint {
  int step = 0;
  const policy::PromptSample* sample = nullptr;
  std::span<const mapping::Frontier> frontiers;
  const mapping::OccupancyGrid* belief = nullptr;
  world::Pose pose;
  int chosen_id = -1;
};

using DecisionObserver = std::function<void(const DecisionPoint&)>;

/// Closed loop: scan, map, extract frontiers, consult the policy on the replan trigger, follow
/// the chosen frontier, and retarget the goal once detected.
EpisodeResult run_episode(const world::Scene& scene, const world::EpisodeSpec& episode, const policy::PolicySpec& policy,
                          const RuntimeConfig& cfg = {}, const DecisionObserver& observer = {});

double compute_sr(std::span<const EpisodeResult> results);
double compute_spl(std::span<const EpisodeResult> results);

struct BenchmarkConfig {
  std::vector<std::uint64_t> scene_seeds;
  int episodes_per_scene = 1;
  world::EpisodeSampling sampling;
  world::TaskKind task_kind = world::TaskKind::ObjectNav;
  RuntimeConfig runtime;
  int threads = 1;
};

struct PolicyReport {
  std::string name;
  double sr = 0.0;
  double spl = 0.0;
  int episode_count = 0;
  double mean_steps = 0.0;
  std::vector<EpisodeResult> episodes;
};

struct BenchmarkReport {
  std::string config_hash;
  std::vector<std::uint64_t> seeds;
  std::vector<PolicyReport> policies;
};

/// Episodes for the given scenes: one sampled spec per (scene, index), seeded by mix_seed(scene seed, index).
std::vector<world::EpisodeSpec> benchmark_episodes(std::span<const world::Scene> scenes, int episodes_per_scene,
                                                   world::TaskKind kind, const world::EpisodeSampling& sampling);

BenchmarkReport run_benchmark(std::span<const world::Scene> scenes, std::span<const policy::PolicySpec> policies,
                              const BenchmarkConfig& cfg);

/// One episode as a JSON object (actions as a compact F/L/R/S string).
std::string episode_to_json(const EpisodeResult& result);

/// Latency and other wall-clock data are left out so equal seeds give byte-identical output.
std::string report_to_json(const BenchmarkReport& report);
std::string report_to_table(const BenchmarkReport& report);

}  // namespace fnav::harness
