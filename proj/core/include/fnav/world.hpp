#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fnav/common.hpp"

namespace fnav::world {

/// Agent pose in meters / degrees. Heading is kept in [0, 360).
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;

  Pose() = default;
  Pose(double x_, double y_, double heading_deg);

  Vec2 position() const { return {x, y}; }
  Vec2 forward() const { return heading_vector(heading); }
  bool operator==(const Pose&) const = default;
};

enum class CellKind : std::uint8_t { Floor, Obstacle };

struct ObjectInstance {
  std::string category;
  std::vector<Cell> cells;
  Vec2 centroid;

  bool operator==(const ObjectInstance&) const = default;
};

/// Ground-truth 2D world. Object cells are stored as Obstacle in the cell grid.
class Scene {
 public:
  Scene() = default;
  Scene(std::string id, std::uint64_t seed, int width_cells, int height_cells, double resolution,
        std::vector<CellKind> cells, std::vector<ObjectInstance> objects);

  const std::string& id() const { return id_; }
  std::uint64_t seed() const { return seed_; }
  int width() const { return width_; }
  int height() const { return height_; }
  double resolution() const { return resolution_; }
  const std::vector<CellKind>& cells() const { return cells_; }
  const std::vector<ObjectInstance>& objects() const { return objects_; }

  bool in_bounds(Cell c) const { return c.col >= 0 && c.row >= 0 && c.col < width_ && c.row < height_; }
  std::size_t index(Cell c) const { return static_cast<std::size_t>(c.row) * width_ + c.col; }
  CellKind at(Cell c) const { return cells_[index(c)]; }
  /// Off-grid cells count as blocked.
  bool blocked(Cell c) const { return !in_bounds(c) || at(c) == CellKind::Obstacle; }

  Cell cell_of(Vec2 p) const;
  Vec2 center_of(Cell c) const;

  std::vector<std::string> categories() const;
  bool has_category(const std::string& category) const;

  bool operator==(const Scene&) const = default;

 private:
  std::string id_;
  std::uint64_t seed_ = 0;
  int width_ = 0;
  int height_ = 0;
  double resolution_ = 0.1;
  std::vector<CellKind> cells_;
  std::vector<ObjectInstance> objects_;
};

struct SensorConfig {
  int num_rays = 91;
  double fov = 90.0;
  double max_range = 5.0;
  double detect_range = 4.0;

  void validate() const;
};

struct ActionConfig {
  double forward_step = 0.25;
  double turn_step = 30.0;

  void validate() const;
};

enum class Action { Forward, TurnLeft, TurnRight, Stop };

std::string_view to_string(Action a);

struct ActionOutcome {
  Pose pose;
  bool collided = false;
  /// Realized translation in meters (0 for turns, stops and blocked moves).
  double translation = 0.0;
};

ActionOutcome apply_action(const Pose& pose, Action action, const Scene& scene, const ActionConfig& cfg);

/// True when the straight segment a->b touches a blocked cell of the scene.
bool segment_blocked(const Scene& scene, Vec2 a, Vec2 b);

struct DepthRay {
  double angle = 0.0;  // world heading of the ray, degrees
  double range = 0.0;
  bool hit = false;
  Cell hit_cell{};     // valid only when hit
};

struct DepthScan {
  Pose pose;
  double resolution = 0.1;
  double max_range = 5.0;
  std::vector<DepthRay> rays;
};

DepthScan raycast_depth(const Scene& scene, const Pose& pose, const SensorConfig& cfg);

struct ObjectNavGoal {
  std::string category;
  bool operator==(const ObjectNavGoal&) const = default;
};
struct ImageNavGoal {
  Pose goal_pose;
  bool operator==(const ImageNavGoal&) const = default;
};
using Task = std::variant<ObjectNavGoal, ImageNavGoal>;

enum class TaskKind { ObjectNav, ImageNav };

/// Cells whose squares define the goal region (object instance cells, or the ImageNav goal cell).
/// Throws GoalAbsent when an ObjectNav category has no instance in the scene.
std::vector<Cell> goal_cells(const Scene& scene, const Task& task);

/// Euclidean distance from p to the nearest goal cell square.
double distance_to_goal(const Scene& scene, const Task& task, Vec2 p);

/// Nearest goal point that is within detect range, inside the field of view and in line of sight.
std::optional<Vec2> oracle_detect_goal(const Scene& scene, const Pose& pose, const Task& task,
                                       const SensorConfig& cfg);

struct SceneParams {
  int width = 96;
  int height = 96;
  double resolution = 0.1;
  std::pair<int, int> room_count_range{4, 6};
  std::pair<int, int> room_size_range{18, 30};
  int corridor_width = 6;
  std::vector<std::string> categories{"chair", "bed", "plant", "toilet", "tv_monitor", "sofa"};
  std::pair<int, int> instances_per_category_range{1, 2};
  std::pair<int, int> clutter_per_room_range{0, 1};
  int max_retries = 400;
};

Scene generate_scene(std::uint64_t seed, const SceneParams& params);

struct EpisodeSpec {
  std::string episode_id;
  std::string scene_id;
  std::uint64_t seed = 0;
  Pose start;
  Task task;
  double success_radius = 1.0;
  int max_steps = 500;
};

TaskKind kind_of(const Task& task);

struct EpisodeSampling {
  double min_geodesic = 3.0;
  double inflate_radius = 0.18;
  /// ObjectNav categories to draw from; empty means every category in the scene.
  std::vector<std::string> categories;
  int max_attempts = 400;
  double turn_step = 30.0;
};

EpisodeSpec sample_episode(const Scene& scene, std::uint64_t seed, TaskKind kind, const EpisodeSampling& opts = {});

}  // namespace fnav::world
