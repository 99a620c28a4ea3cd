#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "fnav/world.hpp"

namespace fnav::world {

/// Run-length encoding of the row-major cell grid, e.g. "12O3F..." ('F' floor, 'O' obstacle).
std::string encode_cells(const std::vector<CellKind>& cells);
std::vector<CellKind> decode_cells(std::string_view rle, std::size_t expected);

/// Scene JSON with keys in the order id, seed, resolution, width_cells, height_cells, cells, objects.
std::string scene_to_json(const Scene& scene);
Scene scene_from_json(std::string_view json);

void save_scene(const Scene& scene, const std::filesystem::path& path);
Scene load_scene(const std::filesystem::path& path);

/// Every *.json scene in a directory, sorted by file name.
std::vector<Scene> load_scene_dir(const std::filesystem::path& dir);

}  // namespace fnav::world
