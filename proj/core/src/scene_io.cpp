#include <algorithm>
#include <cctype>

#include "json.hpp"

#include "fnav/scene_io.hpp"

namespace fnav::world {

using ojson = nlohmann::ordered_json;

std::string encode_cells(const std::vector<CellKind>& cells) {
  std::string out;
  std::size_t i = 0;
  while (i < cells.size()) {
    std::size_t j = i;
    while (j < cells.size() && cells[j] == cells[i]) ++j;
    out += std::to_string(j - i);
    out.push_back(cells[i] == CellKind::Floor ? 'F' : 'O');
    i = j;
  }
  return out;
}

std::vector<CellKind> decode_cells(std::string_view rle, std::size_t expected) {
  std::vector<CellKind> out;
  out.reserve(expected);
  std::size_t count = 0;
  bool have_digits = false;
  for (const char ch : rle) {
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      count = count * 10 + static_cast<std::size_t>(ch - '0');
      have_digits = true;
      if (count > expected) throw Error(ErrorCode::ParseError, "cell run exceeds grid size");
      continue;
    }
    if ((ch != 'F' && ch != 'O') || !have_digits || count == 0) {
      throw Error(ErrorCode::ParseError, "malformed cell run-length string");
    }
    out.insert(out.end(), count, ch == 'F' ? CellKind::Floor : CellKind::Obstacle);
    if (out.size() > expected) throw Error(ErrorCode::ParseError, "cell runs exceed grid size");
    count = 0;
    have_digits = false;
  }
  if (have_digits || out.size() != expected) throw Error(ErrorCode::ParseError, "cell runs do not cover the grid");
  return out;
}

std::string scene_to_json(const Scene& scene) {
  ojson j;
  j["id"] = scene.id();
  j["seed"] = scene.seed();
  j["resolution"] = scene.resolution();
  j["width_cells"] = scene.width();
  j["height_cells"] = scene.height();
  j["cells"] = encode_cells(scene.cells());
  ojson objects = ojson::array();
  for (const auto& obj : scene.objects()) {
    ojson o;
    o["category"] = obj.category;
    ojson cells = ojson::array();
    for (const Cell c : obj.cells) cells.push_back({c.col, c.row});
    o["cells"] = std::move(cells);
    objects.push_back(std::move(o));
  }
  j["objects"] = std::move(objects);
  return j.dump() + "\n";
}

Scene scene_from_json(std::string_view text) {
  try {
    const ojson j = ojson::parse(text);
    const int w = j.at("width_cells").get<int>();
    const int h = j.at("height_cells").get<int>();
    if (w <= 0 || h <= 0) throw Error(ErrorCode::ParseError, "non-positive scene dimensions");
    const double res = j.at("resolution").get<double>();
    auto cells = decode_cells(j.at("cells").get<std::string>(), static_cast<std::size_t>(w) * h);
    std::vector<ObjectInstance> objects;
    for (const auto& o : j.at("objects")) {
      ObjectInstance inst;
      inst.category = o.at("category").get<std::string>();
      Vec2 sum{};
      for (const auto& c : o.at("cells")) {
        const Cell cell{c.at(0).get<int>(), c.at(1).get<int>()};
        inst.cells.push_back(cell);
        sum = sum + Vec2{(cell.col + 0.5) * res, (cell.row + 0.5) * res};
      }
      if (!inst.cells.empty()) inst.centroid = sum * (1.0 / static_cast<double>(inst.cells.size()));
      objects.push_back(std::move(inst));
    }
    return Scene(j.at("id").get<std::string>(), j.at("seed").get<std::uint64_t>(), w, h, res, std::move(cells),
                 std::move(objects));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("scene json: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidArgument) throw Error(ErrorCode::ParseError, e.what());
    throw;
  }
}

void save_scene(const Scene& scene, const std::filesystem::path& path) { write_file(path, scene_to_json(scene)); }

Scene load_scene(const std::filesystem::path& path) { return scene_from_json(read_file(path)); }

std::vector<Scene> load_scene_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) throw Error(ErrorCode::IoError, dir.string() + " is not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<Scene> scenes;
  scenes.reserve(files.size());
  for (const auto& f : files) scenes.push_back(load_scene(f));
  return scenes;
}

}  // namespace fnav::world
