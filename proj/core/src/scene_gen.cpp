#include <algorithm>
#include <limits>
#include <queue>
#include <random>

#include "fnav/world.hpp"

namespace fnav::world {

namespace {

struct Rect {
  int x = 0, y = 0, w = 0, h = 0;  // interior floor cells [x, x+w) x [y, y+h)

  bool overlaps(const Rect& o, int margin) const {
    return x - margin < o.x + o.w && o.x - margin < x + w && y - margin < o.y + o.h && o.y - margin < y + h;
  }
  Cell center() const { return {x + w / 2, y + h / 2}; }
};

class Builder {
 public:
  Builder(const SceneParams& p, std::mt19937_64& rng)
      : p_(p), rng_(rng), grid_(static_cast<std::size_t>(p.width) * p.height, CellKind::Obstacle),
        object_mask_(grid_.size(), 0) {}

  bool build() {
    if (!place_rooms()) return false;
    connect_rooms();
    if (!connected()) return false;
    place_clutter();
    return place_objects();
  }

  std::vector<CellKind> take_grid() { return std::move(grid_); }
  std::vector<ObjectInstance> take_objects() { return std::move(objects_); }

 private:
  int uniform(int lo, int hi) { return lo + static_cast<int>(uniform_index(rng_, static_cast<std::size_t>(hi - lo + 1))); }

  bool inside(int c, int r) const { return c >= 0 && r >= 0 && c < p_.width && r < p_.height; }
  std::size_t idx(int c, int r) const { return static_cast<std::size_t>(r) * p_.width + c; }
  bool floor(int c, int r) const { return inside(c, r) && grid_[idx(c, r)] == CellKind::Floor; }

  void carve(int x0, int y0, int x1, int y1) {
    for (int r = std::max(1, std::min(y0, y1)); r <= std::min(p_.height - 2, std::max(y0, y1)); ++r) {
      for (int c = std::max(1, std::min(x0, x1)); c <= std::min(p_.width - 2, std::max(x0, x1)); ++c) {
        grid_[idx(c, r)] = CellKind::Floor;
      }
    }
  }

  bool place_rooms() {
    const int target = uniform(p_.room_count_range.first, p_.room_count_range.second);
    const int max_w = std::min(p_.room_size_range.second, p_.width - 4);
    const int max_h = std::min(p_.room_size_range.second, p_.height - 4);
    const int min_w = std::min(p_.room_size_range.first, max_w);
    const int min_h = std::min(p_.room_size_range.first, max_h);
    for (int attempt = 0; attempt < 300 && static_cast<int>(rooms_.size()) < target; ++attempt) {
      Rect r;
      r.w = uniform(min_w, max_w);
      r.h = uniform(min_h, max_h);
      r.x = uniform(2, p_.width - r.w - 2);
      r.y = uniform(2, p_.height - r.h - 2);
      const bool clash = std::any_of(rooms_.begin(), rooms_.end(), [&](const Rect& o) { return r.overlaps(o, 3); });
      if (!clash) rooms_.push_back(r);
    }
    if (static_cast<int>(rooms_.size()) < p_.room_count_range.first) return false;
    for (const Rect& r : rooms_) carve(r.x, r.y, r.x + r.w - 1, r.y + r.h - 1);
    return true;
  }

  void corridor_h(int x0, int x1, int row) {
    const int lo = row - p_.corridor_width / 2;
    carve(x0, lo, x1, lo + p_.corridor_width - 1);
  }
  void corridor_v(int y0, int y1, int col) {
    const int lo = col - p_.corridor_width / 2;
    carve(lo, y0, lo + p_.corridor_width - 1, y1);
  }

  void connect_rooms() {
    for (std::size_t i = 1; i < rooms_.size(); ++i) {
      const Cell a = rooms_[i].center();
      std::size_t nearest = 0;
      int best = std::numeric_limits<int>::max();
      for (std::size_t j = 0; j < i; ++j) {
        const Cell b = rooms_[j].center();
        const int d = std::abs(a.col - b.col) + std::abs(a.row - b.row);
        if (d < best) {
          best = d;
          nearest = j;
        }
      }
      const Cell b = rooms_[nearest].center();
      if (uniform(0, 1) == 0) {
        corridor_h(a.col, b.col, a.row);
        corridor_v(a.row, b.row, b.col);
      } else {
        corridor_v(a.row, b.row, a.col);
        corridor_h(a.col, b.col, b.row);
      }
    }
  }

  // Raw free space must be one 8-connected component, and the free cells with a fully free
  // 8-neighborhood must form one 4-connected component so inflated planning stays solvable.
  bool connected() const {
    auto flood = [&](auto&& passable, bool eight) {
      std::size_t total = 0;
      int sc = -1, sr = -1;
      for (int r = 0; r < p_.height; ++r) {
        for (int c = 0; c < p_.width; ++c) {
          if (passable(c, r)) {
            ++total;
            if (sc < 0) sc = c, sr = r;
          }
        }
      }
      if (total == 0) return false;
      std::vector<std::uint8_t> seen(grid_.size(), 0);
      std::queue<Cell> q;
      q.push({sc, sr});
      seen[idx(sc, sr)] = 1;
      std::size_t reached = 0;
      while (!q.empty()) {
        const Cell c = q.front();
        q.pop();
        ++reached;
        for (int dr = -1; dr <= 1; ++dr) {
          for (int dc = -1; dc <= 1; ++dc) {
            if ((dr == 0 && dc == 0) || (!eight && dr != 0 && dc != 0)) continue;
            const int nc = c.col + dc, nr = c.row + dr;
            if (!inside(nc, nr) || seen[idx(nc, nr)] || !passable(nc, nr)) continue;
            seen[idx(nc, nr)] = 1;
            q.push({nc, nr});
          }
        }
      }
      return reached == total;
    };
    auto is_floor = [&](int c, int r) { return floor(c, r); };
    auto is_clear = [&](int c, int r) {
      for (int dr = -1; dr <= 1; ++dr)
        for (int dc = -1; dc <= 1; ++dc)
          if (!floor(c + dc, r + dr)) return false;
      return true;
    };
    return flood(is_floor, true) && flood(is_clear, false);
  }

  // Marks a block of cells as obstacle if every cell is floor inside `room` and the 1-cell ring
  // around it holds no other object; reverts and returns false if connectivity breaks.
  bool try_block(const Rect& room, int x, int y, int w, int h, bool is_object) {
    if (x < room.x || y < room.y || x + w > room.x + room.w || y + h > room.y + room.h) return false;
    for (int r = y - 1; r <= y + h; ++r) {
      for (int c = x - 1; c <= x + w; ++c) {
        if (!inside(c, r)) return false;
        if (object_mask_[idx(c, r)]) return false;
        const bool interior = c >= x && c < x + w && r >= y && r < y + h;
        if (interior && !floor(c, r)) return false;
      }
    }
    for (int r = y; r < y + h; ++r)
      for (int c = x; c < x + w; ++c) grid_[idx(c, r)] = CellKind::Obstacle;
    if (!connected()) {
      for (int r = y; r < y + h; ++r)
        for (int c = x; c < x + w; ++c) grid_[idx(c, r)] = CellKind::Floor;
      return false;
    }
    for (int r = y - (is_object ? 0 : 1); r < y + h + (is_object ? 0 : 1); ++r)
      for (int c = x - (is_object ? 0 : 1); c < x + w + (is_object ? 0 : 1); ++c)
        if (inside(c, r)) object_mask_[idx(c, r)] = 1;
    return true;
  }

  void place_clutter() {
    for (const Rect& room : rooms_) {
      const int count = uniform(p_.clutter_per_room_range.first, p_.clutter_per_room_range.second);
      for (int k = 0; k < count; ++k) {
        for (int attempt = 0; attempt < 20; ++attempt) {
          const int w = uniform(2, 4), h = uniform(2, 3);
          if (room.w < w + 8 || room.h < h + 8) break;
          const int x = uniform(room.x + 4, room.x + room.w - w - 4);
          const int y = uniform(room.y + 4, room.y + room.h - h - 4);
          if (try_block(room, x, y, w, h, false)) break;
        }
      }
    }
  }

  bool place_object(const std::string& category) {
    for (int attempt = 0; attempt < 80; ++attempt) {
      const Rect& room = rooms_[static_cast<std::size_t>(uniform(0, static_cast<int>(rooms_.size()) - 1))];
      const int side = uniform(0, 3);
      const int along = uniform(2, 4), depth = uniform(1, 2);
      int x = 0, y = 0, w = 0, h = 0;
      bool wall_ok = true;
      if (side == 0 || side == 1) {  // bottom / top wall
        w = along;
        h = depth;
        if (room.w < w + 2) continue;
        x = uniform(room.x + 1, room.x + room.w - w - 1);
        y = side == 0 ? room.y : room.y + room.h - h;
        const int wall_row = side == 0 ? y - 1 : y + h;
        for (int c = x; c < x + w; ++c) wall_ok = wall_ok && !floor(c, wall_row);
      } else {  // left / right wall
        w = depth;
        h = along;
        if (room.h < h + 2) continue;
        y = uniform(room.y + 1, room.y + room.h - h - 1);
        x = side == 2 ? room.x : room.x + room.w - w;
        const int wall_col = side == 2 ? x - 1 : x + w;
        for (int r = y; r < y + h; ++r) wall_ok = wall_ok && !floor(wall_col, r);
      }
      if (!wall_ok) continue;
      if (!try_block(room, x, y, w, h, true)) continue;
      ObjectInstance inst;
      inst.category = category;
      Vec2 sum{};
      for (int r = y; r < y + h; ++r) {
        for (int c = x; c < x + w; ++c) {
          inst.cells.push_back({c, r});
          sum = sum + Vec2{(c + 0.5) * p_.resolution, (r + 0.5) * p_.resolution};
        }
      }
      inst.centroid = sum * (1.0 / static_cast<double>(inst.cells.size()));
      objects_.push_back(std::move(inst));
      return true;
    }
    return false;
  }

  bool place_objects() {
    for (const std::string& category : p_.categories) {
      const int count = uniform(p_.instances_per_category_range.first, p_.instances_per_category_range.second);
      for (int k = 0; k < count; ++k) {
        if (!place_object(category) && k == 0) return false;
      }
    }
    return true;
  }

  const SceneParams& p_;
  std::mt19937_64& rng_;
  std::vector<CellKind> grid_;
  std::vector<std::uint8_t> object_mask_;
  std::vector<Rect> rooms_;
  std::vector<ObjectInstance> objects_;
};

void validate(const SceneParams& p) {
  if (p.width < 16 || p.height < 16) throw Error(ErrorCode::InvalidArgument, "scene must be at least 16x16 cells");
  if (!(p.resolution > 0.0)) throw Error(ErrorCode::InvalidArgument, "resolution must be positive");
  if (p.room_count_range.first < 1 || p.room_count_range.first > p.room_count_range.second) {
    throw Error(ErrorCode::InvalidArgument, "invalid room_count_range");
  }
  if (p.room_size_range.first < 6 || p.room_size_range.first > p.room_size_range.second) {
    throw Error(ErrorCode::InvalidArgument, "invalid room_size_range");
  }
  if (p.room_size_range.first + 4 > std::min(p.width, p.height)) {
    throw Error(ErrorCode::InvalidArgument, "rooms do not fit within the grid");
  }
  if (p.corridor_width < 1) throw Error(ErrorCode::InvalidArgument, "corridor_width must be >= 1");
  if (p.instances_per_category_range.first < 1 ||
      p.instances_per_category_range.first > p.instances_per_category_range.second) {
    throw Error(ErrorCode::InvalidArgument, "invalid instances_per_category_range");
  }
  if (p.clutter_per_room_range.first < 0 || p.clutter_per_room_range.first > p.clutter_per_room_range.second) {
    throw Error(ErrorCode::InvalidArgument, "invalid clutter_per_room_range");
  }
}

}  // namespace

Scene generate_scene(std::uint64_t seed, const SceneParams& params) {
  validate(params);
  std::mt19937_64 rng(seed);
  const int attempts = std::max(1, params.max_retries / 40);
  for (int attempt = 0; attempt < attempts; ++attempt) {
    Builder builder(params, rng);
    if (builder.build()) {
      return Scene("scene_" + std::to_string(seed), seed, params.width, params.height, params.resolution,
                   builder.take_grid(), builder.take_objects());
    }
  }
  throw Error(ErrorCode::GenerationFailed,
              "could not place rooms and objects for seed " + std::to_string(seed) + " after bounded retries");
}

}  // namespace fnav::world
