#include "fnav/datagen.hpp"

namespace fnav::datagen {

std::string belief_digest(const mapping::OccupancyGrid& belief) {
  const auto& cells = belief.cells();
  return sha256_hex(std::string_view(reinterpret_cast<const char*>(cells.data()), cells.size()));
}

Trajectory rollout_and_record(const world::Scene& scene, const world::EpisodeSpec& episode, const RolloutConfig& cfg) {
  Trajectory t;
  t.episode = episode;
  const planning::GoalOracle oracle(scene, episode.task);

  policy::PolicySpec driver;
  driver.kind = policy::PolicyKind::GreedyOracle;
  driver.oracle = cfg.oracle;
  harness::RuntimeConfig runtime = cfg.runtime;
  if (cfg.per_step) runtime.replan = {harness::ReplanTrigger::Mode::EveryStep, 1};

  auto observer = [&](const harness::DecisionPoint& d) {
    DecisionRecord rec;
    rec.step = d.step;
    rec.pose = d.pose;
    rec.sample = *d.sample;
    rec.label_id = planning::label_correct_frontier(oracle, *d.belief, d.belief->cell_of(d.pose.position()), d.frontiers);
    rec.sample.answer = rec.sample.letter_for(rec.label_id);
    rec.belief_digest = belief_digest(*d.belief);
    t.decisions.push_back(std::move(rec));
  };
  t.result = harness::run_episode(scene, episode, driver, runtime, observer);
  t.actions = t.result.actions;

  // The runtime observes once per step before acting, so frame i is the pose before action i.
  world::Pose pose = episode.start;
  for (std::size_t i = 0; i < t.actions.size(); ++i) {
    t.frames.push_back({static_cast<int>(i), pose});
    pose = world::apply_action(pose, t.actions[i], scene, runtime.action).pose;
  }
  return t;
}

}  // namespace fnav::datagen
