#include <algorithm>
#include <limits>
#include <queue>
#include <set>
#include <unordered_set>

#include "fnav/grid_traversal.hpp"
#include "fnav/world.hpp"

namespace fnav::world {

Pose::Pose(double x_, double y_, double heading_deg) : x(x_), y(y_), heading(normalize_degrees(heading_deg)) {
  if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(heading_deg)) {
    throw Error(ErrorCode::InvalidPose, "pose coordinates must be finite");
  }
}

namespace {

bool eight_connected(const std::vector<Cell>& cells) {
  if (cells.empty()) return false;
  std::set<Cell> remaining(cells.begin(), cells.end());
  std::queue<Cell> frontier;
  frontier.push(cells.front());
  remaining.erase(cells.front());
  while (!frontier.empty()) {
    const Cell c = frontier.front();
    frontier.pop();
    for (int dr = -1; dr <= 1; ++dr) {
      for (int dc = -1; dc <= 1; ++dc) {
        auto it = remaining.find(Cell{c.col + dc, c.row + dr});
        if (it != remaining.end()) {
          frontier.push(*it);
          remaining.erase(it);
        }
      }
    }
  }
  return remaining.empty();
}

}  // namespace

Scene::Scene(std::string id, std::uint64_t seed, int width_cells, int height_cells, double resolution,
             std::vector<CellKind> cells, std::vector<ObjectInstance> objects)
    : id_(std::move(id)),
      seed_(seed),
      width_(width_cells),
      height_(height_cells),
      resolution_(resolution),
      cells_(std::move(cells)),
      objects_(std::move(objects)) {
  if (width_ <= 0 || height_ <= 0) throw Error(ErrorCode::InvalidArgument, "scene dimensions must be positive");
  if (!(resolution_ > 0.0)) throw Error(ErrorCode::InvalidArgument, "scene resolution must be positive");
  if (cells_.size() != static_cast<std::size_t>(width_) * height_) {
    throw Error(ErrorCode::InvalidArgument, "scene cell count does not match dimensions");
  }
  for (const auto& obj : objects_) {
    if (obj.cells.empty()) throw Error(ErrorCode::InvalidArgument, "object '" + obj.category + "' has no cells");
    for (const Cell c : obj.cells) {
      if (!in_bounds(c)) throw Error(ErrorCode::InvalidArgument, "object cell out of bounds");
      if (at(c) != CellKind::Obstacle) {
        throw Error(ErrorCode::InvalidArgument, "object cells must be non-traversable");
      }
    }
    if (!eight_connected(obj.cells)) {
      throw Error(ErrorCode::InvalidArgument, "object '" + obj.category + "' cells are not 8-connected");
    }
  }
}

Cell Scene::cell_of(Vec2 p) const { return cell_at(p, resolution_); }

Vec2 Scene::center_of(Cell c) const { return cell_center(c, resolution_); }

std::vector<std::string> Scene::categories() const {
  std::set<std::string> out;
  for (const auto& obj : objects_) out.insert(obj.category);
  return {out.begin(), out.end()};
}

bool Scene::has_category(const std::string& category) const {
  return std::any_of(objects_.begin(), objects_.end(),
                     [&](const ObjectInstance& o) { return o.category == category; });
}

TaskKind kind_of(const Task& task) {
  return std::holds_alternative<ObjectNavGoal>(task) ? TaskKind::ObjectNav : TaskKind::ImageNav;
}

std::vector<Cell> goal_cells(const Scene& scene, const Task& task) {
  if (const auto* obj = std::get_if<ObjectNavGoal>(&task)) {
    std::vector<Cell> out;
    for (const auto& inst : scene.objects()) {
      if (inst.category == obj->category) out.insert(out.end(), inst.cells.begin(), inst.cells.end());
    }
    if (out.empty()) throw Error(ErrorCode::GoalAbsent, "category '" + obj->category + "' not in scene");
    return out;
  }
  const auto& img = std::get<ImageNavGoal>(task);
  return {scene.cell_of(img.goal_pose.position())};
}

double distance_to_goal(const Scene& scene, const Task& task, Vec2 p) {
  double best = std::numeric_limits<double>::infinity();
  for (const Cell c : goal_cells(scene, task)) {
    best = std::min(best, distance(p, closest_point_in_cell(c, scene.resolution(), p)));
  }
  return best;
}

}  // namespace fnav::world
