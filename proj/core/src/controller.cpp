#include <cmath>

#include "fnav/grid_traversal.hpp"
#include "fnav/planning.hpp"

namespace fnav::planning {

namespace {

bool segment_clear(const Traversability& map, Vec2 origin, Vec2 a, Vec2 b, Cell exempt) {
  bool clear = true;
  traverse_segment(a - origin, b - origin, map.resolution(), [&](Cell c, double, double) {
    if (c != exempt && map.blocked(c)) clear = false;
    return clear;
  });
  return clear;
}

std::optional<PathResult> try_plan(Traversability map, Cell from, Cell to, const mapping::OccupancyGrid& belief) {
  map.set_blocked(from, false);
  if (belief.at(to) != mapping::Occupancy::Obstacle) map.set_blocked(to, false);
  try {
    return grid_shortest_path(map, from, to);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Unreachable) throw;
    return std::nullopt;
  }
}

double bearing_error(const world::Pose& pose, Vec2 target) {
  const Vec2 d = target - pose.position();
  return signed_degrees(rad_to_deg(std::atan2(d.y, d.x)) - pose.heading);
}

}  // namespace

bool forward_blocked_in_belief(const mapping::OccupancyGrid& belief, const world::Pose& pose, double step) {
  const Vec2 a = pose.position();
  const Vec2 b = a + pose.forward() * step;
  bool blocked = false;
  traverse_segment(a - belief.origin(), b - belief.origin(), belief.resolution(), [&](Cell c, double, double) {
    blocked = !belief.in_bounds(c) || belief.at(c) == mapping::Occupancy::Obstacle;
    return !blocked;
  });
  return blocked;
}

world::Action local_controller_step(const mapping::OccupancyGrid& belief, const world::Pose& pose, Vec2 waypoint,
                                    const world::ActionConfig& cfg, const ControllerConfig& ctl) {
  const Cell from = belief.cell_of(pose.position());
  const Cell to = belief.cell_of(waypoint);
  if (!belief.in_bounds(from) || !belief.in_bounds(to)) {
    throw Error(ErrorCode::ControllerStuck, "controller pose or waypoint outside the grid");
  }

  const Traversability raw = Traversability::from_belief(belief, UnknownAs::Free);
  Traversability map = raw.inflated(ctl.inflate_radius);
  std::optional<PathResult> path = try_plan(map, from, to, belief);
  if (!path) {
    map = raw;
    path = try_plan(map, from, to, belief);
  }
  if (!path) throw Error(ErrorCode::ControllerStuck, "waypoint unreachable in belief");
  map.set_blocked(from, false);

  // Steer at the farthest path point within the lookahead that is in straight-line sight.
  Vec2 target = waypoint;
  const auto& cells = path->cells;
  if (cells.size() > 1) {
    target = belief.center_of(cells[1]);
    StepCounts along;
    for (std::size_t i = 1; i < cells.size(); ++i) {
      const bool diagonal = cells[i].col != cells[i - 1].col && cells[i].row != cells[i - 1].row;
      along = along + (diagonal ? StepCounts{0, 1} : StepCounts{1, 0});
      if (along.meters(belief.resolution()) > ctl.lookahead + 1e-9) break;
      const Vec2 p = i + 1 == cells.size() ? waypoint : belief.center_of(cells[i]);
      if (!segment_clear(map, belief.origin(), pose.position(), p, from)) break;
      target = p;
    }
  }

  const double theta = bearing_error(pose, target);
  const double half = cfg.turn_step / 2.0;
  const world::Action toward = theta > 0.0 ? world::Action::TurnLeft : world::Action::TurnRight;
  const bool ahead_blocked = forward_blocked_in_belief(belief, pose, cfg.forward_step);
  if (std::abs(theta) <= half) return ahead_blocked ? toward : world::Action::Forward;

  // Turning back onto a heading whose forward move is blocked would undo the turn that got us
  // here; keep moving while the target is still in front.
  const world::Pose turned(pose.x, pose.y, pose.heading + (theta > 0.0 ? cfg.turn_step : -cfg.turn_step));
  if (std::abs(bearing_error(turned, target)) <= half && forward_blocked_in_belief(belief, turned, cfg.forward_step) &&
      !ahead_blocked && std::abs(theta) < 90.0) {
    return world::Action::Forward;
  }
  return toward;
}

}  // namespace fnav::planning
