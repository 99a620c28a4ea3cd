#include <algorithm>
#include <map>
#include <random>

#include "fnav/planning.hpp"
#include "fnav/world.hpp"

namespace fnav::world {

namespace {

int uniform_int(std::mt19937_64& rng, int lo, int hi) { return lo + static_cast<int>(uniform_index(rng, static_cast<std::size_t>(hi - lo + 1))); }

Pose random_pose(std::mt19937_64& rng, const Scene& scene, const std::vector<Cell>& cells, double turn_step) {
  const Cell c = cells[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(cells.size()) - 1))];
  const int headings = std::max(1, static_cast<int>(std::lround(360.0 / turn_step)));
  const Vec2 p = scene.center_of(c);
  return {p.x, p.y, uniform_int(rng, 0, headings - 1) * turn_step};
}

std::string kind_name(TaskKind kind) { return kind == TaskKind::ObjectNav ? "objectnav" : "imagenav"; }

}  // namespace

EpisodeSpec sample_episode(const Scene& scene, std::uint64_t seed, TaskKind kind, const EpisodeSampling& opts) {
  if (!(opts.turn_step > 0.0)) throw Error(ErrorCode::InvalidArgument, "turn_step must be > 0");
  std::mt19937_64 rng(seed);

  // Starts and ImageNav goals sit on cells that stay free after inflation, so the controller
  // never begins inside a clearance zone.
  const auto clear_map = planning::Traversability::from_scene(scene).inflated(opts.inflate_radius);
  std::vector<Cell> clear;
  for (int r = 0; r < scene.height(); ++r)
    for (int c = 0; c < scene.width(); ++c)
      if (!clear_map.blocked({c, r})) clear.push_back({c, r});
  if (clear.empty()) throw Error(ErrorCode::SamplingFailed, "scene has no clear cells");

  EpisodeSpec spec;
  spec.scene_id = scene.id();
  spec.seed = seed;
  spec.episode_id = scene.id() + "_" + kind_name(kind) + "_" + std::to_string(seed);

  if (kind == TaskKind::ObjectNav) {
    std::vector<std::string> pool;
    for (const auto& cat : opts.categories.empty() ? scene.categories() : opts.categories)
      if (scene.has_category(cat)) pool.push_back(cat);
    if (pool.empty()) throw Error(ErrorCode::GoalAbsent, "no requested category is present in the scene");
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());

    std::map<std::string, planning::GoalOracle> oracles;
    for (int attempt = 0; attempt < opts.max_attempts; ++attempt) {
      const std::string& cat = pool[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(pool.size()) - 1))];
      const Pose start = random_pose(rng, scene, clear, opts.turn_step);
      auto it = oracles.find(cat);
      if (it == oracles.end()) it = oracles.emplace(cat, planning::GoalOracle(scene, ObjectNavGoal{cat})).first;
      const Cell sc = scene.cell_of(start.position());
      if (!it->second.reachable(sc) || it->second.distance(sc) < opts.min_geodesic) continue;
      spec.start = start;
      spec.task = ObjectNavGoal{cat};
      return spec;
    }
  } else {
    constexpr int kStartsPerGoal = 16;
    for (int attempt = 0; attempt < opts.max_attempts; attempt += kStartsPerGoal) {
      const Pose goal = random_pose(rng, scene, clear, opts.turn_step);
      const Task task = ImageNavGoal{goal};
      const planning::GoalOracle oracle(scene, task);
      for (int k = 0; k < kStartsPerGoal; ++k) {
        const Pose start = random_pose(rng, scene, clear, opts.turn_step);
        const Cell sc = scene.cell_of(start.position());
        if (!oracle.reachable(sc) || oracle.distance(sc) < opts.min_geodesic) continue;
        spec.start = start;
        spec.task = task;
        return spec;
      }
    }
  }
  throw Error(ErrorCode::SamplingFailed, "no start/goal pair satisfies min_geodesic");
}

}  // namespace fnav::world
