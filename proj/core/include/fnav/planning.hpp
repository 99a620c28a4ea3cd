#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fnav/common.hpp"
#include "fnav/mapping.hpp"
#include "fnav/world.hpp"

namespace fnav::planning {

enum class UnknownAs { Free, Obstacle };

/// Path cost as (cardinal steps, diagonal steps). Lengths are straight + diagonal * sqrt(2) cells,
/// so equal-length paths compare bit-identically no matter how they were found.
struct StepCounts {
  std::int32_t straight = 0;
  std::int32_t diagonal = 0;

  double units() const { return straight + diagonal * kSqrt2; }
  double meters(double resolution) const { return units() * resolution; }
  StepCounts operator+(StepCounts o) const { return {straight + o.straight, diagonal + o.diagonal}; }
  bool operator==(const StepCounts&) const = default;
};

/// Binary blocked/free view of either the true scene or a belief grid. Off-grid is blocked.
class Traversability {
 public:
  Traversability() = default;
  Traversability(int width, int height, double resolution, std::vector<std::uint8_t> blocked);

  static Traversability from_scene(const world::Scene& scene);
  static Traversability from_belief(const mapping::OccupancyGrid& grid, UnknownAs unknown_is);

  /// Blocks every cell whose center lies within `radius` meters of a blocked cell's center.
  Traversability inflated(double radius) const;

  int width() const { return width_; }
  int height() const { return height_; }
  double resolution() const { return resolution_; }
  bool in_bounds(Cell c) const { return c.col >= 0 && c.row >= 0 && c.col < width_ && c.row < height_; }
  std::size_t index(Cell c) const { return static_cast<std::size_t>(c.row) * width_ + c.col; }
  bool blocked(Cell c) const { return !in_bounds(c) || blocked_[index(c)] != 0; }
  void set_blocked(Cell c, bool value) { blocked_[index(c)] = value ? 1 : 0; }

  /// One 8-connected move, forbidding diagonal moves past a blocked cardinal neighbor.
  bool can_step(Cell from, int dc, int dr) const;

 private:
  int width_ = 0;
  int height_ = 0;
  double resolution_ = 0.1;
  std::vector<std::uint8_t> blocked_;
};

/// Neighbor order used everywhere a deterministic choice among equal-cost moves is needed:
/// E, N, W, S, NE, NW, SW, SE.
inline constexpr int kNeighborDc[8] = {1, 0, -1, 0, 1, -1, -1, 1};
inline constexpr int kNeighborDr[8] = {0, 1, 0, -1, 1, 1, -1, -1};

struct PathResult {
  double length = 0.0;      // meters
  std::vector<Cell> cells;  // from .. to inclusive
  StepCounts steps;
};

/// Optimal 8-connected path without corner cutting. The start cell is always enterable; a
/// blocked goal, or no connection, raises Unreachable.
PathResult grid_shortest_path(const Traversability& map, Cell from, Cell to);
PathResult grid_shortest_path(const world::Scene& scene, Cell from, Cell to, double inflate_radius = 0.0);
PathResult grid_shortest_path(const mapping::OccupancyGrid& grid, Cell from, Cell to, UnknownAs unknown_is,
                              double inflate_radius = 0.0);

/// Multi-source shortest-path distances over a traversability map.
class DistanceField {
 public:
  DistanceField() = default;
  DistanceField(const Traversability& map, std::span<const Cell> sources);

  bool reachable(Cell c) const { return map_.in_bounds(c) && reached_[map_.index(c)] != 0; }
  StepCounts steps(Cell c) const { return steps_[map_.index(c)]; }
  /// Meters to the nearest source; +inf when unreachable.
  double meters(Cell c) const;

  /// Canonical shortest path from `from` down to a source: at each cell, the first neighbor in
  /// kNeighbor order whose distance plus step cost equals the current distance exactly.
  std::vector<Cell> descend(Cell from) const;

  const Traversability& map() const { return map_; }

 private:
  Traversability map_;
  std::vector<StepCounts> steps_;
  std::vector<std::uint8_t> reached_;
};

/// Traversable cells 8-adjacent to a goal object's cells (ObjectNav) or the goal cell itself (ImageNav).
std::vector<Cell> goal_targets(const world::Scene& scene, const world::Task& task);

/// Shortest true-map distance to the closest goal target (0 when standing on one).
double geodesic_goal_distance(const world::Scene& scene, Cell from, const world::Task& task);

/// True-map distance field towards the goal, computed once per (scene, task).
class GoalOracle {
 public:
  GoalOracle(const world::Scene& scene, world::Task task);

  const world::Scene& scene() const { return *scene_; }
  const world::Task& task() const { return task_; }
  const DistanceField& field() const { return field_; }

  bool reachable(Cell from) const { return field_.reachable(from); }
  /// Throws Unreachable when no goal target is reachable from `from`.
  double distance(Cell from) const;
  std::vector<Cell> shortest_path(Cell from) const;

 private:
  const world::Scene* scene_;
  world::Task task_;
  DistanceField field_;
};

/// Frontier ids ordered by belief-space path length from the agent (Unknown as Free), ties by id.
/// Frontiers unreachable in belief are omitted.
std::vector<int> rank_frontiers_by_distance(const mapping::OccupancyGrid& belief, Cell agent,
                                            std::span<const mapping::Frontier> frontiers);

/// Closest frontier in belief space; Unreachable if none can be reached.
int nearest_frontier(const mapping::OccupancyGrid& belief, Cell agent, std::span<const mapping::Frontier> frontiers);

/// The frontier the true shortest path to the goal crosses first; when the path crosses no
/// frontier, the frontier minimizing belief distance to its waypoint plus true distance from the
/// waypoint to the goal (ties by lowest id).
int label_correct_frontier(const GoalOracle& oracle, const mapping::OccupancyGrid& belief, Cell agent,
                           std::span<const mapping::Frontier> frontiers);
int label_correct_frontier(const world::Scene& scene, const mapping::OccupancyGrid& belief, Cell agent,
                           std::span<const mapping::Frontier> frontiers, const world::Task& task);

struct OracleConfig {
  double goal_switch_distance = 3.5;
};

/// Data-generation expert: nearest frontier, switching to the goal-leading frontier once the goal
/// is within goal_switch_distance geodesic meters.
int greedy_oracle_step(const GoalOracle& oracle, const mapping::OccupancyGrid& belief, const world::Pose& agent,
                       std::span<const mapping::Frontier> frontiers, const OracleConfig& cfg = {});

struct ControllerConfig {
  double inflate_radius = 0.18;
  /// Farthest path point (meters along the path) the controller steers at.
  double lookahead = 1.0;
};

/// Plan-and-follow replacement for a point-goal policy. Replans on the belief (Unknown as Free,
/// obstacles inflated; falls back to the uninflated map when inflation closes every route), steers
/// at the farthest line-of-sight point of the path, and never drives forward into a known obstacle.
/// Throws ControllerStuck when the waypoint is unreachable in belief.
world::Action local_controller_step(const mapping::OccupancyGrid& belief, const world::Pose& pose, Vec2 waypoint,
                                    const world::ActionConfig& cfg, const ControllerConfig& ctl = {});

/// True when a forward step from `pose` would cross a belief Obstacle cell.
bool forward_blocked_in_belief(const mapping::OccupancyGrid& belief, const world::Pose& pose, double step);

}  // namespace fnav::planning
