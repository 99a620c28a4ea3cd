#include <cmath>
#include <cstdio>

#include "fnav/datagen.hpp"

namespace fnav::datagen {

void AuxParams::validate() const {
  if (candidates < 2) throw Error(ErrorCode::InvalidArgument, "aux samples need at least two candidates");
  if (!(match_tolerance > 0.0)) throw Error(ErrorCode::InvalidArgument, "match_tolerance must be > 0");
  if (!(distractor_separation > 2.0 * match_tolerance)) {
    throw Error(ErrorCode::InvalidArgument, "distractor_separation must exceed twice the match tolerance");
  }
  if (samples_per_trajectory < 1 || segment_frames < candidates || max_history_frames < 1) {
    throw Error(ErrorCode::InvalidArgument, "bad aux sample sizes");
  }
}

namespace {

double round_tenth(double v) {
  const double r = std::round(v * 10.0) / 10.0;
  return r == 0.0 ? 0.0 : r;  // no "-0.0" in the question text
}

}  // namespace

std::vector<TrainingSample> generate_aux_samples(const Trajectory& trajectory, const AuxParams& params) {
  params.validate();
  const auto& frames = trajectory.frames;
  std::mt19937_64 rng(mix_seed(params.seed, trajectory.episode.seed));
  std::vector<TrainingSample> out;
  constexpr int kAttemptsPerSample = 24;

  for (int attempt = 0; attempt < params.samples_per_trajectory * kAttemptsPerSample &&
                        static_cast<int>(out.size()) < params.samples_per_trajectory;
       ++attempt) {
    if (frames.empty()) break;
    const std::size_t anchor = uniform_index(rng, frames.size());
    const std::size_t first = anchor + 1 > static_cast<std::size_t>(params.segment_frames)
                                  ? anchor + 1 - static_cast<std::size_t>(params.segment_frames)
                                  : 0;

    // One frame per distinct capture position, earliest first.
    std::vector<const mapping::ViewRecord*> visited;
    for (std::size_t i = first; i <= anchor; ++i) {
      const Vec2 p = frames[i].pose.position();
      bool seen = false;
      for (const auto* v : visited) seen = seen || v->pose.position() == p;
      if (!seen) visited.push_back(&frames[i]);
    }
    if (static_cast<int>(visited.size()) < params.candidates) continue;

    const auto* truth = visited[uniform_index(rng, visited.size())];
    std::vector<const mapping::ViewRecord*> pool;
    for (const auto* v : visited)
      if (v != truth) pool.push_back(v);
    stable_shuffle(pool, rng);
    std::vector<const mapping::ViewRecord*> chosen{truth};
    for (const auto* v : pool) {
      if (static_cast<int>(chosen.size()) == params.candidates) break;
      bool far = true;
      for (const auto* c : chosen) far = far && distance(c->pose.position(), v->pose.position()) >= params.distractor_separation;
      if (far) chosen.push_back(v);
    }
    if (static_cast<int>(chosen.size()) < params.candidates) continue;

    const world::Pose& anchor_pose = frames[anchor].pose;
    const Vec2 local = relative_coords(anchor_pose, truth->pose.position());
    const Vec2 query{round_tenth(local.x), round_tenth(local.y)};

    AuxSample a;
    std::vector<mapping::ViewRecord> segment(frames.begin() + static_cast<std::ptrdiff_t>(first),
                                             frames.begin() + static_cast<std::ptrdiff_t>(anchor) + 1);
    for (const std::size_t i : policy::subsample_indices(segment.size(), static_cast<std::size_t>(params.max_history_frames))) {
      a.history.push_back(segment[i]);
    }
    a.query_xy = query;
    a.question = aux_question(query);
    stable_shuffle(chosen, rng);
    std::string answer;
    for (std::size_t i = 0; i < chosen.size(); ++i) {
      const std::string letter(1, static_cast<char>('A' + i));
      a.candidates.push_back({letter, *chosen[i]});
      if (chosen[i] == truth) answer = letter;
    }

    char suffix[16];
    std::snprintf(suffix, sizeof(suffix), "_aux%02zu", out.size());
    out.push_back({trajectory.episode.episode_id + suffix, SampleKind::AuxSpatial, std::move(a), answer});
  }
  if (out.empty()) {
    throw Error(ErrorCode::SkippedTrajectory,
                trajectory.episode.episode_id + " has too few well-separated positions for aux samples");
  }
  return out;
}

}  // namespace fnav::datagen
