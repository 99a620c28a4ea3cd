#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fnav/common.hpp"
#include "fnav/world.hpp"

namespace fnav::mapping {

enum class Occupancy : std::uint8_t { Unknown, Free, Obstacle };

/// The agent's belief map. Starts all-Unknown; Obstacle marks are never cleared.
class OccupancyGrid {
 public:
  OccupancyGrid() = default;
  OccupancyGrid(int width, int height, double resolution, Vec2 origin = {});

  /// Empty belief with the scene's dimensions and resolution.
  static OccupancyGrid for_scene(const world::Scene& scene);

  int width() const { return width_; }
  int height() const { return height_; }
  double resolution() const { return resolution_; }
  Vec2 origin() const { return origin_; }

  bool in_bounds(Cell c) const { return c.col >= 0 && c.row >= 0 && c.col < width_ && c.row < height_; }
  std::size_t index(Cell c) const { return static_cast<std::size_t>(c.row) * width_ + c.col; }
  Occupancy at(Cell c) const { return cells_[index(c)]; }
  /// Applies the monotone update rules: Unknown -> Free/Obstacle, Free -> Obstacle.
  void mark(Cell c, Occupancy value);
  /// Unconditional write; used to construct test grids.
  void set(Cell c, Occupancy value) { cells_[index(c)] = value; }

  Cell cell_of(Vec2 p) const;
  Vec2 center_of(Cell c) const;

  std::size_t count(Occupancy value) const;
  const std::vector<Occupancy>& cells() const { return cells_; }

  bool operator==(const OccupancyGrid&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  double resolution_ = 0.1;
  Vec2 origin_{};
  std::vector<Occupancy> cells_;
};

/// Marks ray-traversed cells Free, hit cells Obstacle and the agent's own cell Free.
void integrate_scan(OccupancyGrid& grid, const world::DepthScan& scan);

struct Frontier {
  int id = -1;
  std::vector<Cell> cells;  // row-major order
  Cell waypoint_cell{};
  Vec2 waypoint{};
  Vec2 normal{};        // unit, pointing into Unknown space
  Vec2 boundary_dir{};  // unit, along the boundary; normal rotated +90 degrees

  bool operator==(const Frontier&) const = default;
};

/// Free cells with at least one 4-adjacent Unknown cell, row-major.
std::vector<Cell> frontier_cells(const OccupancyGrid& grid);

/// 8-connected clusters of frontier cells before size filtering, in row-major discovery order.
std::vector<std::vector<Cell>> frontier_components(const OccupancyGrid& grid);

/// Waypoint, normal and boundary direction of one frontier component.
Frontier describe_frontier(const OccupancyGrid& grid, std::vector<Cell> cells, int id);

/// Stateless extraction: frontiers with at least min_frontier_cells cells, ids in discovery order.
std::vector<Frontier> extract_frontiers(const OccupancyGrid& grid, int min_frontier_cells = 3);

/// Extraction with identities carried across timesteps by maximum cell overlap with the previous
/// step's frontiers; unmatched components get fresh ids in discovery order.
class FrontierTracker {
 public:
  explicit FrontierTracker(int min_frontier_cells = 3) : min_cells_(min_frontier_cells) {}

  std::vector<Frontier> update(const OccupancyGrid& grid);
  const std::vector<Frontier>& current() const { return previous_; }

 private:
  int min_cells_;
  int next_id_ = 0;
  std::vector<Frontier> previous_;
};

struct ViewRecord {
  int frame_index = 0;
  world::Pose pose;

  bool operator==(const ViewRecord&) const = default;
};

struct ViewChoice {
  int frame_index = -1;
  double score = 0.0;
  /// False when no frame satisfied the visibility predicate and the fallback was used.
  bool visible = false;
};

/// True when the frame sees `target` (within fov and max_range, no Obstacle on the sight line;
/// Unknown cells are transparent).
bool frame_sees(const OccupancyGrid& grid, const world::Pose& pose, Vec2 target, const world::SensorConfig& cfg);

/// Past frame whose heading best faces into the frontier's unknown side.
ViewChoice select_representative_view(const Frontier& frontier, std::span<const ViewRecord> history,
                                      const OccupancyGrid& grid, const world::SensorConfig& cfg);

}  // namespace fnav::mapping
