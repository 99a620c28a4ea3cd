#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "fnav/common.hpp"

namespace fnav {

inline Cell cell_at(Vec2 p, double resolution) {
  return {static_cast<int>(std::floor(p.x / resolution)), static_cast<int>(std::floor(p.y / resolution))};
}

inline Vec2 cell_center(Cell c, double resolution) {
  return {(c.col + 0.5) * resolution, (c.row + 0.5) * resolution};
}

/// Closest point of a cell's square to p.
Vec2 closest_point_in_cell(Cell c, double resolution, Vec2 p);

/// Grid DDA over the segment a->b. Calls visit(cell, t_enter, t_exit) for every cell the
/// segment passes through, in order, with t in [0, 1] along the segment. The visitor returns
/// false to stop early. When the segment crosses a cell corner exactly, the x-neighbor is
/// visited before the diagonal cell, so corner crossings are never skipped.
template <class Visitor>
void traverse_segment(Vec2 a, Vec2 b, double resolution, Visitor&& visit) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const Vec2 d = b - a;
  Cell c = cell_at(a, resolution);
  const Cell end = cell_at(b, resolution);

  const int step_x = d.x > 0.0 ? 1 : (d.x < 0.0 ? -1 : 0);
  const int step_y = d.y > 0.0 ? 1 : (d.y < 0.0 ? -1 : 0);
  double t_max_x = kInf, t_delta_x = kInf, t_max_y = kInf, t_delta_y = kInf;
  if (step_x != 0) {
    const double boundary = (c.col + (step_x > 0 ? 1 : 0)) * resolution;
    t_max_x = (boundary - a.x) / d.x;
    t_delta_x = resolution / std::abs(d.x);
  }
  if (step_y != 0) {
    const double boundary = (c.row + (step_y > 0 ? 1 : 0)) * resolution;
    t_max_y = (boundary - a.y) / d.y;
    t_delta_y = resolution / std::abs(d.y);
  }

  const int max_steps = std::abs(end.col - c.col) + std::abs(end.row - c.row) + 2;
  double t_enter = 0.0;
  for (int i = 0;; ++i) {
    const double t_exit = std::min({t_max_x, t_max_y, 1.0});
    if (!visit(c, t_enter, t_exit)) return;
    if (c == end || i >= max_steps) return;
    if (t_max_x <= t_max_y) {
      c.col += step_x;
      t_enter = t_max_x;
      t_max_x += t_delta_x;
    } else {
      c.row += step_y;
      t_enter = t_max_y;
      t_max_y += t_delta_y;
    }
    if (t_enter > 1.0) return;
  }
}

}  // namespace fnav
