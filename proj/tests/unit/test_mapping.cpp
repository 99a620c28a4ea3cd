#include <gtest/gtest.h>

#include <random>

#include "../support/oracles.hpp"
#include "fnav/mapping.hpp"
#include "fnav/snapshot.hpp"

namespace {

using namespace fnav;
using namespace fnav::mapping;
using world::Pose;

world::Scene wall_scene() {
  std::vector<std::string> rows(40, std::string(60, '.'));
  for (auto& r : rows) r[20] = '#';
  return fnav::testing::scene_from_ascii(rows);
}

TEST(Integrate, HeadOnWall) {
  const auto scene = wall_scene();
  auto grid = OccupancyGrid::for_scene(scene);
  const auto scan = world::raycast_depth(scene, Pose(1.0, 2.05, 0), {});
  integrate_scan(grid, scan);

  std::set<Cell> hits;
  for (const auto& r : scan.rays) {
    if (!r.hit) continue;
    hits.insert(r.hit_cell);
    EXPECT_EQ(grid.at(r.hit_cell), Occupancy::Obstacle);
  }
  EXPECT_FALSE(hits.empty());
  EXPECT_EQ(grid.count(Occupancy::Obstacle), hits.size());
  for (int r = 0; r < grid.height(); ++r)
    for (int c = 20; c < grid.width(); ++c) EXPECT_NE(grid.at({c, r}), Occupancy::Free);
  // Straight corridor of free cells up to the wall.
  for (int c = 10; c < 20; ++c) EXPECT_EQ(grid.at({c, 20}), Occupancy::Free);
}

TEST(Integrate, AgentCellFreeAndIdempotent) {
  const auto scene = world::generate_scene(8, {});
  const auto ep = world::sample_episode(scene, 2, world::TaskKind::ObjectNav);
  auto grid = OccupancyGrid::for_scene(scene);
  const auto scan = world::raycast_depth(scene, ep.start, {});
  integrate_scan(grid, scan);
  EXPECT_EQ(grid.at(grid.cell_of(ep.start.position())), Occupancy::Free);
  const auto once = grid;
  integrate_scan(grid, scan);
  EXPECT_EQ(grid, once);
}

TEST(Integrate, ObstacleNeverCleared) {
  const auto scene = fnav::testing::open_scene(40, 40);
  auto grid = OccupancyGrid::for_scene(scene);
  grid.set({15, 10}, Occupancy::Obstacle);
  integrate_scan(grid, world::raycast_depth(scene, Pose(1.05, 1.05, 0), {}));
  EXPECT_EQ(grid.at({15, 10}), Occupancy::Obstacle);
}

TEST(Integrate, ResolutionMismatch) {
  const auto scene = fnav::testing::open_scene(20, 20);
  OccupancyGrid grid(20, 20, 0.05);
  try {
    integrate_scan(grid, world::raycast_depth(scene, Pose(1.0, 1.0, 0), {}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::GridMismatch);
  }
}

OccupancyGrid half_known(int n, int free_cols) {
  OccupancyGrid g(n, n, 0.1);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < free_cols; ++c) g.set({c, r}, Occupancy::Free);
  return g;
}

TEST(Frontiers, FullyObservedHasNone) {
  OccupancyGrid g(8, 8, 0.1);
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 8; ++c) g.set({c, r}, (c + r) % 5 == 0 ? Occupancy::Obstacle : Occupancy::Free);
  EXPECT_TRUE(extract_frontiers(g, 1).empty());
}

TEST(Frontiers, HalfKnownGrid) {
  const auto g = half_known(5, 3);
  const auto fs = extract_frontiers(g, 1);
  ASSERT_EQ(fs.size(), 1u);
  const auto expected = fnav::testing::frontier_cell_set(g);
  EXPECT_EQ(std::set<Cell>(fs[0].cells.begin(), fs[0].cells.end()), expected);
  for (const Cell c : fs[0].cells) EXPECT_EQ(c.col, 2);
  EXPECT_EQ(fs[0].cells.size(), 5u);
  EXPECT_NEAR(fs[0].normal.x, 1.0, 1e-12);
  EXPECT_NEAR(fs[0].normal.y, 0.0, 1e-12);
  EXPECT_EQ(fs[0].waypoint_cell, (Cell{2, 2}));
  EXPECT_EQ(fs[0].id, 0);
}

TEST(Frontiers, SmallComponentDropped) {
  OccupancyGrid g(5, 5, 0.1);
  g.set({2, 2}, Occupancy::Free);
  EXPECT_EQ(extract_frontiers(g, 1).size(), 1u);
  EXPECT_TRUE(extract_frontiers(g, 2).empty());
}

TEST(Frontiers, RandomGridsMatchBruteForce) {
  std::mt19937_64 rng(17);
  for (int k = 0; k < 30; ++k) {
    const auto g = fnav::testing::random_belief(rng, 8 + k % 20, 8 + (k * 7) % 20);
    EXPECT_EQ(fnav::testing::check_frontiers(g, 1 + k % 4), "") << "grid " << k;
  }
}

TEST(Frontiers, TrackerKeepsIds) {
  auto g = half_known(20, 5);
  // A second, separate frontier along the top edge of an isolated free block.
  for (int c = 12; c < 18; ++c) g.set({c, 1}, Occupancy::Free);
  FrontierTracker tracker(3);
  const auto first = tracker.update(g);
  ASSERT_EQ(first.size(), 2u);
  // Growing the left region shifts its frontier but keeps the overlap-matched identity.
  for (int r = 0; r < 10; ++r) g.set({5, r}, Occupancy::Free);
  const auto second = tracker.update(g);
  ASSERT_EQ(second.size(), 2u);
  EXPECT_EQ(second[0].id, first[0].id);
  EXPECT_EQ(second[1].id, first[1].id);
  EXPECT_EQ(second[1].cells, first[1].cells);
  // A brand new component gets the next fresh id.
  g.set({10, 18}, Occupancy::Free);
  g.set({11, 18}, Occupancy::Free);
  g.set({12, 18}, Occupancy::Free);
  const auto third = tracker.update(g);
  ASSERT_EQ(third.size(), 3u);
  EXPECT_EQ(third.back().id, 2);
}

TEST(RepresentativeView, SingleAlignedFrame) {
  const auto g = half_known(20, 10);
  const auto fs = extract_frontiers(g, 3);
  ASSERT_EQ(fs.size(), 1u);
  const std::vector<ViewRecord> history{{0, Pose(0.35, fs[0].waypoint.y, 0)}};
  const auto v = select_representative_view(fs[0], history, g, {});
  EXPECT_EQ(v.frame_index, 0);
  EXPECT_NEAR(v.score, 1.0, 1e-12);
  EXPECT_TRUE(v.visible);
}

TEST(RepresentativeView, TieTakesEarlierFrame) {
  const auto g = half_known(20, 10);
  const auto fs = extract_frontiers(g, 3);
  const std::vector<ViewRecord> history{{3, Pose(0.35, 1.0, 10)}, {7, Pose(0.35, 1.0, 10)}};
  EXPECT_EQ(select_representative_view(fs[0], history, g, {}).frame_index, 3);
}

TEST(RepresentativeView, EmptyHistoryThrows) {
  const auto g = half_known(10, 5);
  const auto fs = extract_frontiers(g, 3);
  try {
    select_representative_view(fs[0], {}, g, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoHistory);
  }
}

// Exhaustive scoring oracle: visibility by 1 mm marching, then argmax with earliest-frame ties.
int oracle_view(const Frontier& f, const std::vector<ViewRecord>& history, const OccupancyGrid& g,
                const world::SensorConfig& cfg) {
  auto sees = [&](const Pose& p) {
    const Vec2 d = f.waypoint - p.position();
    if (d.norm() > cfg.max_range) return false;
    const double bearing = std::atan2(d.y, d.x) * 180.0 / kPi;
    double off = std::fmod(std::abs(bearing - p.heading), 360.0);
    off = std::min(off, 360.0 - off);
    if (off > cfg.fov / 2.0) return false;
    const Cell own = g.cell_of(p.position()), goal = g.cell_of(f.waypoint);
    for (double t = 0; t <= d.norm(); t += 1e-3) {
      const Cell c = g.cell_of(p.position() + d.normalized() * t);
      if (c != own && c != goal && g.in_bounds(c) && g.at(c) == Occupancy::Obstacle) return false;
    }
    return true;
  };
  int best = -1;
  double best_score = -2;
  for (const bool need_visible : {true, false}) {
    for (const auto& v : history) {
      if (need_visible && !sees(v.pose)) continue;
      const double s = v.pose.forward().dot(f.normal);
      if (best < 0 || s > best_score + 1e-12 || (std::abs(s - best_score) <= 1e-12 && v.frame_index < best)) {
        best = v.frame_index;
        best_score = s;
      }
    }
    if (best >= 0) return best;
  }
  return best;
}

TEST(RepresentativeView, MixedHistoryMatchesExhaustiveOracle) {
  auto g = half_known(30, 15);
  g.set({8, 10}, Occupancy::Obstacle);
  g.set({9, 10}, Occupancy::Obstacle);
  g.set({8, 20}, Occupancy::Obstacle);
  const auto fs = extract_frontiers(g, 3);
  ASSERT_EQ(fs.size(), 1u);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> x(0.05, 1.35), y(0.05, 2.95);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<ViewRecord> history;
    for (int i = 0; i < 10; ++i) history.push_back({i, Pose(x(rng), y(rng), 30.0 * (rng() % 12))});
    EXPECT_EQ(select_representative_view(fs[0], history, g, {}).frame_index, oracle_view(fs[0], history, g, {}))
        << "trial " << trial;
  }
}

TEST(Snapshot, AsciiMarksAgentAndFrontier) {
  const auto g = half_known(6, 3);
  const auto fs = extract_frontiers(g, 1);
  const auto text = render_ascii(g, fs, Vec2{0.05, 0.05});
  EXPECT_NE(text.find('@'), std::string::npos);
  EXPECT_NE(text.find('0'), std::string::npos);
  EXPECT_NE(text.find('?'), std::string::npos);
  EXPECT_EQ(snapshot_name("ep", 7), "ep_0007.ppm");
  EXPECT_EQ(render_ppm(g, fs).rfind("P6", 0), 0u);
}

}  // namespace
