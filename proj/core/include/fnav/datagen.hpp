#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fnav/harness.hpp"
#include "fnav/policy.hpp"
#include "fnav/world.hpp"

namespace fnav::datagen {

enum class SampleKind { ObjectNav, Ovon, ImageNav, AuxSpatial };

inline constexpr SampleKind kAllSampleKinds[] = {SampleKind::ObjectNav, SampleKind::Ovon, SampleKind::ImageNav,
                                                 SampleKind::AuxSpatial};

/// "objectnav", "ovon", "imagenav", "aux_spatial".
std::string_view to_string(SampleKind kind);
/// Accepts the names above plus "aux" for aux_spatial.
SampleKind parse_sample_kind(std::string_view text);

struct AuxCandidate {
  std::string letter;
  mapping::ViewRecord view;

  bool operator==(const AuxCandidate&) const = default;
};

struct AuxSample {
  std::vector<mapping::ViewRecord> history;
  Vec2 query_xy;  // local frame of the final history frame, rounded to 0.1 m
  std::string question;
  std::vector<AuxCandidate> candidates;

  bool operator==(const AuxSample&) const = default;
};

struct TrainingSample {
  std::string sample_id;
  SampleKind kind = SampleKind::ObjectNav;
  std::variant<policy::PromptSample, AuxSample> body;
  std::string answer;

  bool operator==(const TrainingSample&) const = default;
};

/// Target in the frame with +x along the heading and +y 90 degrees counterclockwise from it.
Vec2 relative_coords(const world::Pose& current, Vec2 target);
/// Inverse of relative_coords.
Vec2 world_coords(const world::Pose& current, Vec2 local);

/// "Which part of the environment is located at (X,Y)?" with one decimal each.
std::string aux_question(Vec2 query_xy);

/// Frontier-choice state at one policy consultation, with its correct-frontier label.
struct DecisionRecord {
  int step = 0;
  world::Pose pose;
  policy::PromptSample sample;  // answer filled in
  int label_id = -1;
  /// SHA-256 of the belief cells at the decision, for replay checks.
  std::string belief_digest;
};

struct Trajectory {
  world::EpisodeSpec episode;
  std::vector<mapping::ViewRecord> frames;
  std::vector<world::Action> actions;
  std::vector<DecisionRecord> decisions;
  harness::EpisodeResult result;
};

struct RolloutConfig {
  harness::RuntimeConfig runtime;
  planning::OracleConfig oracle;
  /// Emit a sample at every step instead of only when the frontier decision is revisited.
  bool per_step = false;
};

std::string belief_digest(const mapping::OccupancyGrid& belief);

/// Drives the episode with the greedy exploration oracle and labels every policy consultation
/// with the correct frontier.
Trajectory rollout_and_record(const world::Scene& scene, const world::EpisodeSpec& episode,
                              const RolloutConfig& cfg = {});

/// One navigation sample per recorded decision. `kind` must be a navigation kind.
std::vector<TrainingSample> navigation_samples(const Trajectory& trajectory, SampleKind kind);

struct AuxParams {
  int candidates = 4;
  double match_tolerance = 0.3;
  double distractor_separation = 1.0;
  int samples_per_trajectory = 4;
  /// Frames in the segment the anchor and candidates are drawn from.
  int segment_frames = 40;
  int max_history_frames = 20;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Throws SkippedTrajectory when the trajectory never visits enough well-separated positions.
std::vector<TrainingSample> generate_aux_samples(const Trajectory& trajectory, const AuxParams& params = {});

std::string sample_to_json(const TrainingSample& sample);
TrainingSample sample_from_json(const std::string& line);

struct MixtureConfig {
  std::map<SampleKind, int> counts;
  std::uint64_t seed = 0;

  /// 26k/26k/40k/30k times `scale`, rounded.
  static MixtureConfig default_ratio(double scale, std::uint64_t seed = 0);
  /// "objectnav=260,ovon=260,imagenav=400,aux=300"
  static MixtureConfig parse(const std::string& text, std::uint64_t seed = 0);
  void validate() const;
};

struct DatasetManifest {
  std::map<SampleKind, int> requested;
  std::map<SampleKind, int> counts;
  std::map<std::string, std::uint64_t> seeds;
  std::string config_hash;
  std::map<std::string, std::string> file_sha256;

  std::string to_json() const;
};

/// Takes the first `counts[kind]` samples of each stream (short streams are reported as
/// truncated), writes one JSONL per kind, a seeded-shuffle combined.jsonl and manifest.json.
DatasetManifest write_dataset(const std::map<SampleKind, std::vector<TrainingSample>>& streams,
                              const MixtureConfig& mixture, const std::filesystem::path& out_dir,
                              const std::string& config_description = {},
                              const std::map<std::string, std::uint64_t>& extra_seeds = {});

struct DatasetConfig {
  MixtureConfig mixture;
  std::uint64_t seed = 0;
  /// ObjectNav draws goals from the seen vocabulary, the OVON analog from the unseen one.
  std::vector<std::string> seen_categories{"chair", "bed", "plant", "toilet", "tv_monitor", "sofa"};
  std::vector<std::string> unseen_categories{"bookshelf", "sink", "washing_machine", "piano"};
  world::EpisodeSampling sampling;
  RolloutConfig rollout;
  AuxParams aux;
  /// Cap on episodes tried per kind, so scenes lacking a vocabulary cannot loop forever.
  int max_episodes_per_kind = 5000;

  std::string describe() const;
};

std::map<SampleKind, std::vector<TrainingSample>> generate_streams(std::span<const world::Scene> scenes,
                                                                   const DatasetConfig& cfg);

DatasetManifest generate_dataset(std::span<const world::Scene> scenes, const DatasetConfig& cfg,
                                 const std::filesystem::path& out_dir);

}  // namespace fnav::datagen
