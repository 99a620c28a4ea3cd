#include <algorithm>
#include <limits>
#include <unordered_map>

#include "fnav/planning.hpp"

namespace fnav::planning {

namespace {

DistanceField belief_field_from(const mapping::OccupancyGrid& belief, Cell agent) {
  const Cell sources[] = {agent};
  return DistanceField(Traversability::from_belief(belief, UnknownAs::Free), sources);
}

}  // namespace

std::vector<int> rank_frontiers_by_distance(const mapping::OccupancyGrid& belief, Cell agent,
                                            std::span<const mapping::Frontier> frontiers) {
  const DistanceField field = belief_field_from(belief, agent);
  std::vector<std::pair<double, int>> ranked;
  for (const auto& f : frontiers) {
    if (field.reachable(f.waypoint_cell)) ranked.emplace_back(field.meters(f.waypoint_cell), f.id);
  }
  std::sort(ranked.begin(), ranked.end());
  std::vector<int> ids;
  ids.reserve(ranked.size());
  for (const auto& r : ranked) ids.push_back(r.second);
  return ids;
}

int nearest_frontier(const mapping::OccupancyGrid& belief, Cell agent, std::span<const mapping::Frontier> frontiers) {
  const auto ranked = rank_frontiers_by_distance(belief, agent, frontiers);
  if (ranked.empty()) throw Error(ErrorCode::Unreachable, "no frontier reachable in belief");
  return ranked.front();
}

int label_correct_frontier(const GoalOracle& oracle, const mapping::OccupancyGrid& belief, Cell agent,
                           std::span<const mapping::Frontier> frontiers) {
  if (frontiers.empty()) throw Error(ErrorCode::InvalidArgument, "no frontiers to label");
  if (frontiers.size() == 1) return frontiers.front().id;

  std::unordered_map<Cell, int, CellHash> owner;
  for (const auto& f : frontiers)
    for (const Cell c : f.cells) owner.emplace(c, f.id);

  for (const Cell c : oracle.shortest_path(agent)) {
    if (const auto it = owner.find(c); it != owner.end()) return it->second;
  }

  const DistanceField belief_field = belief_field_from(belief, agent);
  constexpr double kInf = std::numeric_limits<double>::infinity();
  int best = -1;
  double best_cost = kInf;
  for (const auto& f : frontiers) {
    const double cost = belief_field.meters(f.waypoint_cell) + oracle.field().meters(f.waypoint_cell);
    if (best < 0 || cost < best_cost || (cost == best_cost && f.id < best)) {
      best = f.id;
      best_cost = cost;
    }
  }
  return best;
}

int label_correct_frontier(const world::Scene& scene, const mapping::OccupancyGrid& belief, Cell agent,
                           std::span<const mapping::Frontier> frontiers, const world::Task& task) {
  return label_correct_frontier(GoalOracle(scene, task), belief, agent, frontiers);
}

int greedy_oracle_step(const GoalOracle& oracle, const mapping::OccupancyGrid& belief, const world::Pose& agent,
                       std::span<const mapping::Frontier> frontiers, const OracleConfig& cfg) {
  if (frontiers.empty()) throw Error(ErrorCode::InvalidArgument, "no frontiers to choose from");
  if (!(cfg.goal_switch_distance > 0.0)) throw Error(ErrorCode::InvalidArgument, "goal_switch_distance must be > 0");
  const Cell cell = belief.cell_of(agent.position());
  if (oracle.distance(cell) <= cfg.goal_switch_distance) {
    return label_correct_frontier(oracle, belief, cell, frontiers);
  }
  const auto ranked = rank_frontiers_by_distance(belief, cell, frontiers);
  // Every frontier unreachable in belief cannot happen while the agent stands on Free space, but
  // the labeler still gives a sensible answer if it does.
  return ranked.empty() ? label_correct_frontier(oracle, belief, cell, frontiers) : ranked.front();
}

}  // namespace fnav::planning
