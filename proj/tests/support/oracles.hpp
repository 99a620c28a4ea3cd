#pragma once

// Reference implementations used as test oracles. They share no code with fnav_core beyond the
// plain data types, and favor obviousness over speed.

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "fnav/datagen.hpp"
#include "fnav/mapping.hpp"
#include "fnav/world.hpp"

namespace fnav::testing {

/// Scene from rows of text, top row first. '#' obstacle, '.' floor, a lowercase letter marks an
/// object cell of the category named in `legend` (letter -> category).
world::Scene scene_from_ascii(const std::vector<std::string>& rows, double resolution = 0.1,
                              const std::vector<std::pair<char, std::string>>& legend = {});

/// Open rectangular scene with no obstacles.
world::Scene open_scene(int width, int height, double resolution = 0.1);

/// Dense blocked mask, row-major, 1 = blocked.
struct Mask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> blocked;

  bool free(int c, int r) const { return c >= 0 && r >= 0 && c < width && r < height && !blocked[r * width + c]; }
};

Mask mask_of(const world::Scene& scene);
Mask mask_of(const mapping::OccupancyGrid& grid, bool unknown_blocked);

/// Textbook Dijkstra with double costs (1 and sqrt(2) cells), no corner cutting. Returns cell
/// distances from every source; +inf where unreachable.
std::vector<double> dijkstra(const Mask& m, const std::vector<Cell>& sources);

/// Shortest path cell-by-cell from `from` to the nearest source: at each cell take the first
/// neighbor (E, N, W, S, NE, NW, SW, SE) lying on a shortest path.
std::vector<Cell> descend(const Mask& m, const std::vector<double>& dist, Cell from);

/// Belief grid with random Free rectangles, scattered obstacles and Unknown elsewhere.
mapping::OccupancyGrid random_belief(std::mt19937_64& rng, int width, int height);

/// Random blocked mask with the given obstacle density.
Mask random_mask(std::mt19937_64& rng, int width, int height, double density);

/// Brute-force frontier predicate over every cell.
std::set<Cell> frontier_cell_set(const mapping::OccupancyGrid& grid);

/// Union-find 8-connected grouping of a cell set; groups sorted, then ordered by first cell.
std::vector<std::set<Cell>> group_8(const std::set<Cell>& cells);

/// Empty when extraction matches the brute-force predicate and grouping, and every published
/// frontier invariant holds; otherwise a description of the first violation.
std::string check_frontiers(const mapping::OccupancyGrid& grid, int min_cells);

/// Marches along a ray in 1 mm increments until the point enters a blocked cell.
double march_range(const world::Scene& scene, Vec2 origin, double angle_deg, double max_range, double step = 1e-3);

/// Object-adjacent free cells (ObjectNav) or the goal cell (ImageNav).
std::vector<Cell> goal_sources(const world::Scene& scene, const world::Task& task);

/// Correct-frontier label recomputed from scratch on the true map and the belief.
int relabel(const world::Scene& scene, const mapping::OccupancyGrid& belief, Cell agent,
            const std::vector<mapping::Frontier>& frontiers, const world::Task& task);

/// Replays a recorded trajectory from its start pose and relabels every decision. Returns the
/// number of decisions whose stored answer disagrees; `checked` receives how many were checked.
int replay_and_relabel(const world::Scene& scene, const datagen::Trajectory& t, int* checked = nullptr);

}  // namespace fnav::testing
