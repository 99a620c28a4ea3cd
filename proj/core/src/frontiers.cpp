#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "fnav/mapping.hpp"

namespace fnav::mapping {

namespace {

constexpr int kDc4[4] = {1, 0, -1, 0};
constexpr int kDr4[4] = {0, 1, 0, -1};

bool is_frontier(const OccupancyGrid& grid, Cell c) {
  if (grid.at(c) != Occupancy::Free) return false;
  for (int k = 0; k < 4; ++k) {
    const Cell n{c.col + kDc4[k], c.row + kDr4[k]};
    if (grid.in_bounds(n) && grid.at(n) == Occupancy::Unknown) return true;
  }
  return false;
}

}  // namespace

std::vector<Cell> frontier_cells(const OccupancyGrid& grid) {
  std::vector<Cell> out;
  for (int r = 0; r < grid.height(); ++r) {
    for (int c = 0; c < grid.width(); ++c) {
      if (is_frontier(grid, {c, r})) out.push_back({c, r});
    }
  }
  return out;
}

std::vector<std::vector<Cell>> frontier_components(const OccupancyGrid& grid) {
  const std::size_t n = static_cast<std::size_t>(grid.width()) * grid.height();
  // 0 = not frontier, 1 = unvisited frontier, 2 = assigned
  std::vector<std::uint8_t> state(n, 0);
  for (int r = 0; r < grid.height(); ++r)
    for (int c = 0; c < grid.width(); ++c)
      if (is_frontier(grid, {c, r})) state[grid.index({c, r})] = 1;

  std::vector<std::vector<Cell>> components;
  std::vector<Cell> stack;
  for (int r = 0; r < grid.height(); ++r) {
    for (int c = 0; c < grid.width(); ++c) {
      if (state[grid.index({c, r})] != 1) continue;
      std::vector<Cell> comp;
      stack.assign(1, Cell{c, r});
      state[grid.index({c, r})] = 2;
      while (!stack.empty()) {
        const Cell cur = stack.back();
        stack.pop_back();
        comp.push_back(cur);
        for (int dr = -1; dr <= 1; ++dr) {
          for (int dc = -1; dc <= 1; ++dc) {
            const Cell nb{cur.col + dc, cur.row + dr};
            if (!grid.in_bounds(nb) || state[grid.index(nb)] != 1) continue;
            state[grid.index(nb)] = 2;
            stack.push_back(nb);
          }
        }
      }
      std::sort(comp.begin(), comp.end(), [](Cell a, Cell b) { return std::tie(a.row, a.col) < std::tie(b.row, b.col); });
      components.push_back(std::move(comp));
    }
  }
  return components;
}

Frontier describe_frontier(const OccupancyGrid& grid, std::vector<Cell> cells, int id) {
  Frontier f;
  f.id = id;
  f.cells = std::move(cells);
  if (f.cells.empty()) throw Error(ErrorCode::InvalidArgument, "frontier without cells");

  const double count = static_cast<double>(f.cells.size());
  double mx = 0.0, my = 0.0;
  for (const Cell c : f.cells) {
    mx += c.col;
    my += c.row;
  }
  mx /= count;
  my /= count;

  double best = std::numeric_limits<double>::infinity();
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  Vec2 vote{};
  for (const Cell c : f.cells) {
    const double dx = c.col - mx, dy = c.row - my;
    const double d2 = dx * dx + dy * dy;
    if (d2 < best) {
      best = d2;
      f.waypoint_cell = c;
    }
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
    for (int k = 0; k < 4; ++k) {
      const Cell nb{c.col + kDc4[k], c.row + kDr4[k]};
      if (grid.in_bounds(nb) && grid.at(nb) == Occupancy::Unknown) vote = vote + Vec2{double(kDc4[k]), double(kDr4[k])};
    }
  }
  f.waypoint = grid.center_of(f.waypoint_cell);

  constexpr double kEps = 1e-9;
  if (std::abs(sxx - syy) < kEps * count && std::abs(sxy) < kEps * count) {
    // Isotropic component: the unknown-side vote alone fixes the orientation.
    f.normal = vote.norm() > 0.0 ? vote.normalized() : Vec2{1.0, 0.0};
  } else {
    const double half_diff = 0.5 * (sxx - syy);
    const double lambda = 0.5 * (sxx + syy) + std::sqrt(half_diff * half_diff + sxy * sxy);
    Vec2 axis = std::abs(sxy) > kEps ? Vec2{lambda - syy, sxy}.normalized()
                                     : (sxx >= syy ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0});
    Vec2 n = axis.perp();
    if (n.dot(vote) < 0.0) n = n * -1.0;
    f.normal = n;
  }
  f.boundary_dir = f.normal.perp();
  return f;
}

std::vector<Frontier> extract_frontiers(const OccupancyGrid& grid, int min_frontier_cells) {
  std::vector<Frontier> out;
  for (auto& comp : frontier_components(grid)) {
    if (static_cast<int>(comp.size()) < min_frontier_cells) continue;
    out.push_back(describe_frontier(grid, std::move(comp), static_cast<int>(out.size())));
  }
  return out;
}

std::vector<Frontier> FrontierTracker::update(const OccupancyGrid& grid) {
  std::vector<std::vector<Cell>> comps;
  for (auto& comp : frontier_components(grid)) {
    if (static_cast<int>(comp.size()) >= min_cells_) comps.push_back(std::move(comp));
  }

  std::vector<int> owner(static_cast<std::size_t>(grid.width()) * grid.height(), -1);
  for (std::size_t p = 0; p < previous_.size(); ++p) {
    for (const Cell c : previous_[p].cells) {
      if (grid.in_bounds(c)) owner[grid.index(c)] = static_cast<int>(p);
    }
  }

  // (overlap, new index, previous index); greedy maximum-overlap assignment.
  std::vector<std::tuple<int, int, int>> pairs;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    std::vector<int> overlap(previous_.size(), 0);
    for (const Cell c : comps[i]) {
      const int p = owner[grid.index(c)];
      if (p >= 0) ++overlap[static_cast<std::size_t>(p)];
    }
    for (std::size_t p = 0; p < previous_.size(); ++p) {
      if (overlap[p] > 0) pairs.emplace_back(overlap[p], static_cast<int>(i), static_cast<int>(p));
    }
  }
  std::sort(pairs.begin(), pairs.end(), [&](const auto& a, const auto& b) {
    if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) > std::get<0>(b);
    if (std::get<1>(a) != std::get<1>(b)) return std::get<1>(a) < std::get<1>(b);
    return previous_[std::get<2>(a)].id < previous_[std::get<2>(b)].id;
  });

  std::vector<int> assigned(comps.size(), -1);
  std::vector<bool> used(previous_.size(), false);
  for (const auto& [ov, i, p] : pairs) {
    if (assigned[i] >= 0 || used[p]) continue;
    assigned[i] = previous_[p].id;
    used[p] = true;
  }

  std::vector<Frontier> out;
  out.reserve(comps.size());
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const int id = assigned[i] >= 0 ? assigned[i] : next_id_++;
    out.push_back(describe_frontier(grid, std::move(comps[i]), id));
  }
  std::sort(out.begin(), out.end(), [](const Frontier& a, const Frontier& b) { return a.id < b.id; });
  previous_ = out;
  return out;
}

}  // namespace fnav::mapping
