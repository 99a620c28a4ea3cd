#include "fnav/snapshot.hpp"

#include <array>
#include <cstdio>

namespace fnav::mapping {

namespace {

constexpr std::array<std::array<unsigned char, 3>, 8> kPalette{{
    {230, 25, 75}, {60, 180, 75}, {0, 130, 200}, {245, 130, 48},
    {145, 30, 180}, {70, 240, 240}, {240, 50, 230}, {210, 245, 60},
}};

std::vector<int> frontier_ids(const OccupancyGrid& grid, std::span<const Frontier> frontiers) {
  std::vector<int> ids(static_cast<std::size_t>(grid.width()) * grid.height(), -1);
  for (const auto& f : frontiers)
    for (const Cell c : f.cells)
      if (grid.in_bounds(c)) ids[grid.index(c)] = f.id;
  return ids;
}

}  // namespace

std::string render_ppm(const OccupancyGrid& grid, std::span<const Frontier> frontiers, std::optional<Vec2> agent) {
  const auto ids = frontier_ids(grid, frontiers);
  const Cell agent_cell = agent ? grid.cell_of(*agent) : Cell{-1, -1};  // off-grid when absent
  std::string out = "P6\n" + std::to_string(grid.width()) + " " + std::to_string(grid.height()) + "\n255\n";
  out.reserve(out.size() + 3 * ids.size());
  for (int r = grid.height() - 1; r >= 0; --r) {
    for (int c = 0; c < grid.width(); ++c) {
      const Cell cell{c, r};
      std::array<unsigned char, 3> rgb{128, 128, 128};
      if (agent_cell == cell) {
        rgb = {255, 0, 0};
      } else if (const int id = ids[grid.index(cell)]; id >= 0) {
        rgb = kPalette[static_cast<std::size_t>(id) % kPalette.size()];
      } else if (grid.at(cell) == Occupancy::Free) {
        rgb = {255, 255, 255};
      } else if (grid.at(cell) == Occupancy::Obstacle) {
        rgb = {0, 0, 0};
      }
      out.append(reinterpret_cast<const char*>(rgb.data()), 3);
    }
  }
  return out;
}

std::string render_ascii(const OccupancyGrid& grid, std::span<const Frontier> frontiers, std::optional<Vec2> agent) {
  static constexpr char kDigits[] = "0123456789abcdefghijklmnopqrstuvwxyz";
  const auto ids = frontier_ids(grid, frontiers);
  const Cell agent_cell = agent ? grid.cell_of(*agent) : Cell{-1, -1};  // off-grid when absent
  std::string out;
  out.reserve(static_cast<std::size_t>(grid.width() + 1) * grid.height());
  for (int r = grid.height() - 1; r >= 0; --r) {
    for (int c = 0; c < grid.width(); ++c) {
      const Cell cell{c, r};
      if (agent_cell == cell) {
        out.push_back('@');
      } else if (const int id = ids[grid.index(cell)]; id >= 0) {
        out.push_back(kDigits[id % 36]);
      } else {
        switch (grid.at(cell)) {
          case Occupancy::Unknown: out.push_back('?'); break;
          case Occupancy::Free: out.push_back('.'); break;
          case Occupancy::Obstacle: out.push_back('#'); break;
        }
      }
    }
    out.push_back('\n');
  }
  return out;
}

std::string snapshot_name(const std::string& episode_id, int step) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "_%04d.ppm", step);
  return episode_id + buf;
}

void write_snapshot(const std::filesystem::path& dir, const std::string& episode_id, int step,
                    const OccupancyGrid& grid, std::span<const Frontier> frontiers, std::optional<Vec2> agent) {
  write_file(dir / snapshot_name(episode_id, step), render_ppm(grid, frontiers, agent));
}

}  // namespace fnav::mapping
