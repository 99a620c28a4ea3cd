#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>

#include "fnav/mapping.hpp"

namespace fnav::mapping {

// Debug renderings of a belief grid. The top image row is the grid's highest row (world +y up).
// Unknown is gray, Free white, Obstacle black, frontier cells colored by id, the agent red.

std::string render_ppm(const OccupancyGrid& grid, std::span<const Frontier> frontiers,
                       std::optional<Vec2> agent = std::nullopt);

/// '?' unknown, '.' free, '#' obstacle, frontier cells as a base-36 id digit, '@' agent.
std::string render_ascii(const OccupancyGrid& grid, std::span<const Frontier> frontiers,
                         std::optional<Vec2> agent = std::nullopt);

/// "{episode_id}_{step:04}.ppm"
std::string snapshot_name(const std::string& episode_id, int step);

void write_snapshot(const std::filesystem::path& dir, const std::string& episode_id, int step,
                    const OccupancyGrid& grid, std::span<const Frontier> frontiers,
                    std::optional<Vec2> agent = std::nullopt);

}  // namespace fnav::mapping
