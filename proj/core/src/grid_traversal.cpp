#include "fnav/grid_traversal.hpp"

#include <algorithm>

namespace fnav {

Vec2 closest_point_in_cell(Cell c, double resolution, Vec2 p) {
  const double x0 = c.col * resolution;
  const double y0 = c.row * resolution;
  return {std::clamp(p.x, x0, x0 + resolution), std::clamp(p.y, y0, y0 + resolution)};
}

}  // namespace fnav
