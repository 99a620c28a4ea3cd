#include <algorithm>
#include <cmath>

#include "fnav/grid_traversal.hpp"
#include "fnav/mapping.hpp"

namespace fnav::mapping {

bool frame_sees(const OccupancyGrid& grid, const world::Pose& pose, Vec2 target, const world::SensorConfig& cfg) {
  const Vec2 p = pose.position();
  const Vec2 d = target - p;
  const double dist = d.norm();
  if (dist > cfg.max_range) return false;
  if (dist > 1e-12) {
    const double bearing = rad_to_deg(std::atan2(d.y, d.x));
    if (std::abs(signed_degrees(bearing - pose.heading)) > cfg.fov / 2.0 + 1e-9) return false;
  }
  const Cell own = grid.cell_of(p);
  const Cell goal = grid.cell_of(target);
  bool clear = true;
  traverse_segment(p - grid.origin(), target - grid.origin(), grid.resolution(), [&](Cell c, double, double) {
    if (c == own || c == goal || !grid.in_bounds(c)) return c != goal;
    if (grid.at(c) == Occupancy::Obstacle) {
      clear = false;
      return false;
    }
    return true;
  });
  return clear;
}

ViewChoice select_representative_view(const Frontier& frontier, std::span<const ViewRecord> history,
                                      const OccupancyGrid& grid, const world::SensorConfig& cfg) {
  if (history.empty()) throw Error(ErrorCode::NoHistory, "representative view needs at least one frame");

  struct Scored {
    double score;
    int frame;
    std::size_t idx;
  };
  std::vector<Scored> ranked;
  ranked.reserve(history.size());
  for (std::size_t i = 0; i < history.size(); ++i) {
    ranked.push_back({history[i].pose.forward().dot(frontier.normal), history[i].frame_index, i});
  }
  std::sort(ranked.begin(), ranked.end(), [](const Scored& a, const Scored& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.frame < b.frame;
  });

  // Highest score first, so the first visible frame is the visible argmax.
  for (const Scored& s : ranked) {
    if (frame_sees(grid, history[s.idx].pose, frontier.waypoint, cfg)) return {s.frame, s.score, true};
  }
  return {ranked.front().frame, ranked.front().score, false};
}

}  // namespace fnav::mapping
