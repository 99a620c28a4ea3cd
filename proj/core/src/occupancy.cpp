#include <algorithm>
#include <cmath>

#include "fnav/grid_traversal.hpp"
#include "fnav/mapping.hpp"

namespace fnav::mapping {

OccupancyGrid::OccupancyGrid(int width, int height, double resolution, Vec2 origin)
    : width_(width), height_(height), resolution_(resolution), origin_(origin) {
  if (width <= 0 || height <= 0) throw Error(ErrorCode::InvalidArgument, "grid dimensions must be positive");
  if (!(resolution > 0.0)) throw Error(ErrorCode::InvalidArgument, "grid resolution must be positive");
  cells_.assign(static_cast<std::size_t>(width) * height, Occupancy::Unknown);
}

OccupancyGrid OccupancyGrid::for_scene(const world::Scene& scene) {
  return OccupancyGrid(scene.width(), scene.height(), scene.resolution());
}

void OccupancyGrid::mark(Cell c, Occupancy value) {
  Occupancy& cur = cells_[index(c)];
  if (cur == Occupancy::Obstacle || value == Occupancy::Unknown) return;
  cur = value;
}

Cell OccupancyGrid::cell_of(Vec2 p) const { return cell_at(p - origin_, resolution_); }

Vec2 OccupancyGrid::center_of(Cell c) const { return cell_center(c, resolution_) + origin_; }

std::size_t OccupancyGrid::count(Occupancy value) const {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), value));
}

void integrate_scan(OccupancyGrid& grid, const world::DepthScan& scan) {
  if (std::abs(grid.resolution() - scan.resolution) > 1e-12) {
    throw Error(ErrorCode::GridMismatch, "scan resolution differs from grid resolution");
  }
  const Vec2 origin = scan.pose.position() - grid.origin();
  const Cell agent = cell_at(origin, grid.resolution());
  if (!grid.in_bounds(agent)) throw Error(ErrorCode::InvalidPose, "scan pose outside the grid");

  for (const auto& ray : scan.rays) {
    // Same segment as the raycast so both walk identical cell sequences.
    const Vec2 end = origin + heading_vector(ray.angle) * scan.max_range;
    traverse_segment(origin, end, grid.resolution(), [&](Cell c, double t_enter, double) {
      if (ray.hit && (c == ray.hit_cell || t_enter * scan.max_range > ray.range + 1e-9)) {
        if (grid.in_bounds(ray.hit_cell)) grid.mark(ray.hit_cell, Occupancy::Obstacle);
        return false;
      }
      if (grid.in_bounds(c)) grid.mark(c, Occupancy::Free);
      return true;
    });
  }
  grid.mark(agent, Occupancy::Free);
}

}  // namespace fnav::mapping
