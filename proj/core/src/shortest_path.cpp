#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>

#include "fnav/planning.hpp"

namespace fnav::planning {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

StepCounts step_cost(int k) { return k < 4 ? StepCounts{1, 0} : StepCounts{0, 1}; }

struct QueueItem {
  double key;
  std::size_t index;
  bool operator>(const QueueItem& o) const { return key != o.key ? key > o.key : index > o.index; }
};

using MinQueue = std::priority_queue<QueueItem, std::vector<QueueItem>, std::greater<>>;

}  // namespace

Traversability::Traversability(int width, int height, double resolution, std::vector<std::uint8_t> blocked)
    : width_(width), height_(height), resolution_(resolution), blocked_(std::move(blocked)) {
  if (blocked_.size() != static_cast<std::size_t>(width_) * height_) {
    throw Error(ErrorCode::InvalidArgument, "traversability size does not match dimensions");
  }
}

Traversability Traversability::from_scene(const world::Scene& scene) {
  std::vector<std::uint8_t> blocked(scene.cells().size());
  for (std::size_t i = 0; i < blocked.size(); ++i) blocked[i] = scene.cells()[i] == world::CellKind::Obstacle;
  return {scene.width(), scene.height(), scene.resolution(), std::move(blocked)};
}

Traversability Traversability::from_belief(const mapping::OccupancyGrid& grid, UnknownAs unknown_is) {
  std::vector<std::uint8_t> blocked(grid.cells().size());
  for (std::size_t i = 0; i < blocked.size(); ++i) {
    const auto v = grid.cells()[i];
    blocked[i] = v == mapping::Occupancy::Obstacle ||
                 (v == mapping::Occupancy::Unknown && unknown_is == UnknownAs::Obstacle);
  }
  return {grid.width(), grid.height(), grid.resolution(), std::move(blocked)};
}

Traversability Traversability::inflated(double radius) const {
  if (radius <= 0.0) return *this;
  const int reach = static_cast<int>(std::ceil(radius / resolution_));
  std::vector<std::pair<int, int>> offsets;
  for (int dr = -reach; dr <= reach; ++dr)
    for (int dc = -reach; dc <= reach; ++dc)
      if (std::hypot(dc, dr) * resolution_ <= radius + 1e-9) offsets.emplace_back(dc, dr);

  std::vector<std::uint8_t> out(blocked_);
  for (int r = 0; r < height_; ++r) {
    for (int c = 0; c < width_; ++c) {
      if (!blocked_[index({c, r})]) continue;
      for (const auto& [dc, dr] : offsets) {
        const Cell n{c + dc, r + dr};
        if (in_bounds(n)) out[index(n)] = 1;
      }
    }
  }
  return {width_, height_, resolution_, std::move(out)};
}

bool Traversability::can_step(Cell from, int dc, int dr) const {
  if (blocked({from.col + dc, from.row + dr})) return false;
  if (dc != 0 && dr != 0) {
    return !blocked({from.col + dc, from.row}) && !blocked({from.col, from.row + dr});
  }
  return true;
}

PathResult grid_shortest_path(const Traversability& map, Cell from, Cell to) {
  if (!map.in_bounds(from)) throw Error(ErrorCode::Unreachable, "start cell outside the grid");
  if (map.blocked(to)) throw Error(ErrorCode::Unreachable, "goal cell is blocked");
  PathResult result;
  if (from == to) {
    result.cells = {from};
    return result;
  }

  const std::size_t n = static_cast<std::size_t>(map.width()) * map.height();
  std::vector<StepCounts> g(n);
  std::vector<std::uint8_t> seen(n, 0), closed(n, 0);
  std::vector<std::int32_t> parent(n, -1);
  auto heuristic = [&](Cell c) {
    const int dx = std::abs(c.col - to.col), dy = std::abs(c.row - to.row);
    return std::abs(dx - dy) + std::min(dx, dy) * kSqrt2;
  };

  MinQueue open;
  const std::size_t start = map.index(from);
  seen[start] = 1;
  open.push({heuristic(from), start});
  const std::size_t goal = map.index(to);
  while (!open.empty()) {
    const QueueItem top = open.top();
    open.pop();
    if (closed[top.index]) continue;
    closed[top.index] = 1;
    if (top.index == goal) break;
    const Cell cur{static_cast<int>(top.index % map.width()), static_cast<int>(top.index / map.width())};
    for (int k = 0; k < 8; ++k) {
      if (!map.can_step(cur, kNeighborDc[k], kNeighborDr[k])) continue;
      const Cell nb{cur.col + kNeighborDc[k], cur.row + kNeighborDr[k]};
      const std::size_t ni = map.index(nb);
      if (closed[ni]) continue;
      const StepCounts cand = g[top.index] + step_cost(k);
      if (seen[ni] && cand.units() >= g[ni].units()) continue;
      seen[ni] = 1;
      g[ni] = cand;
      parent[ni] = static_cast<std::int32_t>(top.index);
      open.push({cand.units() + heuristic(nb), ni});
    }
  }
  if (!closed[goal]) throw Error(ErrorCode::Unreachable, "no path between cells");

  for (std::int64_t i = static_cast<std::int64_t>(goal); i >= 0; i = parent[static_cast<std::size_t>(i)]) {
    result.cells.push_back({static_cast<int>(i % map.width()), static_cast<int>(i / map.width())});
    if (static_cast<std::size_t>(i) == start) break;
  }
  std::reverse(result.cells.begin(), result.cells.end());
  result.steps = g[goal];
  result.length = result.steps.meters(map.resolution());
  return result;
}

PathResult grid_shortest_path(const world::Scene& scene, Cell from, Cell to, double inflate_radius) {
  return grid_shortest_path(Traversability::from_scene(scene).inflated(inflate_radius), from, to);
}

PathResult grid_shortest_path(const mapping::OccupancyGrid& grid, Cell from, Cell to, UnknownAs unknown_is,
                              double inflate_radius) {
  return grid_shortest_path(Traversability::from_belief(grid, unknown_is).inflated(inflate_radius), from, to);
}

DistanceField::DistanceField(const Traversability& map, std::span<const Cell> sources) : map_(map) {
  const std::size_t n = static_cast<std::size_t>(map.width()) * map.height();
  steps_.assign(n, StepCounts{});
  reached_.assign(n, 0);
  std::vector<std::uint8_t> closed(n, 0);
  MinQueue open;
  for (const Cell s : sources) {
    if (!map.in_bounds(s)) continue;
    const std::size_t i = map.index(s);
    if (reached_[i]) continue;
    reached_[i] = 1;
    open.push({0.0, i});
  }
  while (!open.empty()) {
    const QueueItem top = open.top();
    open.pop();
    if (closed[top.index]) continue;
    closed[top.index] = 1;
    const Cell cur{static_cast<int>(top.index % map.width()), static_cast<int>(top.index / map.width())};
    for (int k = 0; k < 8; ++k) {
      // Moves are symmetric, so stepping outward from sources gives distances towards them.
      if (!map.can_step(cur, kNeighborDc[k], kNeighborDr[k])) continue;
      const std::size_t ni = map.index({cur.col + kNeighborDc[k], cur.row + kNeighborDr[k]});
      if (closed[ni]) continue;
      const StepCounts cand = steps_[top.index] + step_cost(k);
      if (reached_[ni] && cand.units() >= steps_[ni].units()) continue;
      reached_[ni] = 1;
      steps_[ni] = cand;
      open.push({cand.units(), ni});
    }
  }
}

double DistanceField::meters(Cell c) const {
  if (!reachable(c)) return kInf;
  return steps(c).meters(map_.resolution());
}

std::vector<Cell> DistanceField::descend(Cell from) const {
  if (!reachable(from)) throw Error(ErrorCode::Unreachable, "cell not connected to any source");
  std::vector<Cell> path{from};
  Cell cur = from;
  while (!(steps(cur) == StepCounts{})) {
    bool moved = false;
    for (int k = 0; k < 8 && !moved; ++k) {
      const Cell nb{cur.col + kNeighborDc[k], cur.row + kNeighborDr[k]};
      // A move is usable in both directions, so checking it from the neighbor's side is equivalent.
      if (!reachable(nb) || !map_.can_step(nb, -kNeighborDc[k], -kNeighborDr[k])) continue;
      if (steps(nb) + step_cost(k) == steps(cur)) {
        cur = nb;
        moved = true;
      }
    }
    if (!moved) throw Error(ErrorCode::Unreachable, "distance field descent stalled");
    path.push_back(cur);
  }
  return path;
}

std::vector<Cell> goal_targets(const world::Scene& scene, const world::Task& task) {
  const std::vector<Cell> goal = world::goal_cells(scene, task);
  if (std::holds_alternative<world::ImageNavGoal>(task)) {
    if (scene.blocked(goal.front())) throw Error(ErrorCode::Unreachable, "ImageNav goal cell is not traversable");
    return goal;
  }
  std::set<Cell> targets;
  for (const Cell c : goal) {
    for (int k = 0; k < 8; ++k) {
      const Cell n{c.col + kNeighborDc[k], c.row + kNeighborDr[k]};
      if (!scene.blocked(n)) targets.insert(n);
    }
  }
  return {targets.begin(), targets.end()};
}

double geodesic_goal_distance(const world::Scene& scene, Cell from, const world::Task& task) {
  return GoalOracle(scene, task).distance(from);
}

GoalOracle::GoalOracle(const world::Scene& scene, world::Task task)
    : scene_(&scene), task_(std::move(task)) {
  const auto targets = goal_targets(scene, task_);
  field_ = DistanceField(Traversability::from_scene(scene), targets);
}

double GoalOracle::distance(Cell from) const {
  if (scene_->blocked(from)) throw Error(ErrorCode::Unreachable, "start cell is not traversable");
  if (!field_.reachable(from)) throw Error(ErrorCode::Unreachable, "goal unreachable from cell");
  return field_.meters(from);
}

std::vector<Cell> GoalOracle::shortest_path(Cell from) const {
  if (scene_->blocked(from)) throw Error(ErrorCode::Unreachable, "start cell is not traversable");
  return field_.descend(from);
}

}  // namespace fnav::planning
