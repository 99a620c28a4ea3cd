#include <cmath>
#include <limits>

#include "fnav/grid_traversal.hpp"
#include "fnav/world.hpp"

namespace fnav::world {

DepthScan raycast_depth(const Scene& scene, const Pose& pose, const SensorConfig& cfg) {
  cfg.validate();
  DepthScan scan;
  scan.pose = pose;
  scan.resolution = scene.resolution();
  scan.max_range = cfg.max_range;
  scan.rays.reserve(static_cast<std::size_t>(cfg.num_rays));

  const Vec2 origin = pose.position();
  const Cell start = scene.cell_of(origin);
  const double spacing = cfg.fov / (cfg.num_rays - 1);
  for (int i = 0; i < cfg.num_rays; ++i) {
    DepthRay ray;
    ray.angle = normalize_degrees(pose.heading - cfg.fov / 2.0 + i * spacing);
    ray.range = cfg.max_range;
    const Vec2 end = origin + heading_vector(ray.angle) * cfg.max_range;
    traverse_segment(origin, end, scene.resolution(), [&](Cell c, double t_enter, double) {
      if (c == start) return true;
      if (scene.blocked(c)) {
        ray.hit = true;
        ray.hit_cell = c;
        ray.range = std::max(t_enter * cfg.max_range, 1e-9);
        return false;
      }
      return true;
    });
    scan.rays.push_back(ray);
  }
  return scan;
}

std::optional<Vec2> oracle_detect_goal(const Scene& scene, const Pose& pose, const Task& task,
                                       const SensorConfig& cfg) {
  const std::vector<Cell> targets = goal_cells(scene, task);
  const Vec2 p = pose.position();
  const double res = scene.resolution();
  const Cell own = scene.cell_of(p);

  auto visible = [&](Cell c, Vec2 q) {
    const double d = distance(p, q);
    if (d > cfg.detect_range) return false;
    if (d > 0.0) {
      const double bearing = rad_to_deg(std::atan2(q.y - p.y, q.x - p.x));
      if (std::abs(signed_degrees(bearing - pose.heading)) > cfg.fov / 2.0 + 1e-9) return false;
    }
    bool occluded = false;
    traverse_segment(p, q, res, [&](Cell v, double, double) {
      if (v == c) return false;
      if (v != own && scene.blocked(v)) occluded = true;
      return !occluded;
    });
    return !occluded;
  };

  // The closest point of a cell can sit on a corner whose sight line grazes a neighboring wall,
  // so every cell is probed at its closest point and on a grid of interior points; the nearest
  // probe that passes all predicates wins.
  static constexpr double kFractions[] = {0.02, 0.26, 0.5, 0.74, 0.98};
  std::optional<Vec2> best;
  double best_dist = std::numeric_limits<double>::infinity();
  auto consider = [&](Cell c, Vec2 q) {
    const double d = distance(p, q);
    if (d < best_dist && visible(c, q)) {
      best = q;
      best_dist = d;
    }
  };
  for (const Cell c : targets) {
    const Vec2 closest = closest_point_in_cell(c, res, p);
    if (distance(p, closest) > cfg.detect_range || distance(p, closest) >= best_dist) continue;
    // Aim slightly inside the target cell so boundary points resolve to it.
    consider(c, closest + (cell_center(c, res) - closest) * 1e-6);
    for (const double fy : kFractions)
      for (const double fx : kFractions) consider(c, {(c.col + fx) * res, (c.row + fy) * res});
  }
  return best;
}

}  // namespace fnav::world
