#include <cmath>

#include "fnav/grid_traversal.hpp"
#include "fnav/world.hpp"

namespace fnav::world {

void SensorConfig::validate() const {
  if (num_rays < 2) throw Error(ErrorCode::InvalidArgument, "num_rays must be >= 2");
  if (!(fov > 0.0 && fov <= 360.0)) throw Error(ErrorCode::InvalidArgument, "fov must be in (0, 360]");
  if (!(max_range > 0.0)) throw Error(ErrorCode::InvalidArgument, "max_range must be positive");
  if (detect_range < 0.0) throw Error(ErrorCode::InvalidArgument, "detect_range must be non-negative");
}

void ActionConfig::validate() const {
  if (!(forward_step > 0.0)) throw Error(ErrorCode::InvalidArgument, "forward_step must be positive");
  if (!(turn_step > 0.0)) throw Error(ErrorCode::InvalidArgument, "turn_step must be positive");
  const double k = 360.0 / turn_step;
  if (std::abs(k - std::round(k)) > 1e-9) throw Error(ErrorCode::InvalidArgument, "turn_step must divide 360");
}

std::string_view to_string(Action a) {
  switch (a) {
    case Action::Forward: return "forward";
    case Action::TurnLeft: return "turn_left";
    case Action::TurnRight: return "turn_right";
    case Action::Stop: return "stop";
  }
  return "?";
}

bool segment_blocked(const Scene& scene, Vec2 a, Vec2 b) {
  bool blocked = false;
  traverse_segment(a, b, scene.resolution(), [&](Cell c, double, double) {
    if (scene.blocked(c)) {
      blocked = true;
      return false;
    }
    return true;
  });
  return blocked;
}

ActionOutcome apply_action(const Pose& pose, Action action, const Scene& scene, const ActionConfig& cfg) {
  if (!scene.in_bounds(scene.cell_of(pose.position()))) {
    throw Error(ErrorCode::InvalidPose, "pose is outside the scene grid");
  }
  ActionOutcome out{pose, false, 0.0};
  switch (action) {
    case Action::TurnLeft:
      out.pose = Pose(pose.x, pose.y, pose.heading + cfg.turn_step);
      break;
    case Action::TurnRight:
      out.pose = Pose(pose.x, pose.y, pose.heading - cfg.turn_step);
      break;
    case Action::Forward: {
      const Vec2 target = pose.position() + pose.forward() * cfg.forward_step;
      if (segment_blocked(scene, pose.position(), target)) {
        out.collided = true;
      } else {
        out.pose = Pose(target.x, target.y, pose.heading);
        out.translation = cfg.forward_step;
      }
      break;
    }
    case Action::Stop:
      break;
  }
  return out;
}

}  // namespace fnav::world
