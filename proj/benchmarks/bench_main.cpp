#include <benchmark/benchmark.h>

#include "fnav/harness.hpp"
#include "fnav/mapping.hpp"
#include "fnav/planning.hpp"

namespace {

using namespace fnav;

const world::Scene& big_scene() {
  static const world::Scene s = [] {
    world::SceneParams p;
    p.width = p.height = 128;
    p.room_count_range = {9, 11};
    p.room_size_range = {16, 26};
    return world::generate_scene(3, p);
  }();
  return s;
}

const world::EpisodeSpec& big_episode() {
  static const auto ep = world::sample_episode(big_scene(), 1, world::TaskKind::ObjectNav);
  return ep;
}

void BM_Raycast(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(world::raycast_depth(big_scene(), big_episode().start, {}));
}
BENCHMARK(BM_Raycast);

void BM_IntegrateScan(benchmark::State& state) {
  const auto scan = world::raycast_depth(big_scene(), big_episode().start, {});
  auto grid = mapping::OccupancyGrid::for_scene(big_scene());
  for (auto _ : state) {
    mapping::integrate_scan(grid, scan);
    benchmark::ClobberMemory();
  }
}
BENCHMARK(BM_IntegrateScan);

// Belief after a short exploration, so there are several frontiers to extract.
const mapping::OccupancyGrid& explored_belief() {
  static const auto g = [] {
    auto grid = mapping::OccupancyGrid::for_scene(big_scene());
    world::Pose p = big_episode().start;
    for (int i = 0; i < 12; ++i) {
      mapping::integrate_scan(grid, world::raycast_depth(big_scene(), p, {}));
      p = world::apply_action(p, i % 3 == 0 ? world::Action::TurnLeft : world::Action::Forward, big_scene(), {}).pose;
    }
    return grid;
  }();
  return g;
}

void BM_ExtractFrontiers(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(mapping::extract_frontiers(explored_belief(), 3));
}
BENCHMARK(BM_ExtractFrontiers);

void BM_ShortestPathScene(benchmark::State& state) {
  const auto& s = big_scene();
  const Cell from = s.cell_of(big_episode().start.position());
  Cell to = from;
  for (int r = s.height() - 2; r > 0 && to == from; --r)
    for (int c = s.width() - 2; c > 0; --c)
      if (!s.blocked({c, r})) {
        to = {c, r};
        break;
      }
  for (auto _ : state) {
    try {
      benchmark::DoNotOptimize(planning::grid_shortest_path(s, from, to));
    } catch (const Error&) {
    }
  }
}
BENCHMARK(BM_ShortestPathScene);

void BM_Episode500Steps(benchmark::State& state) {
  harness::RuntimeConfig cfg;
  cfg.detection = false;
  const auto pol = policy::parse_policy("random:1");
  for (auto _ : state) benchmark::DoNotOptimize(harness::run_episode(big_scene(), big_episode(), pol, cfg));
}
BENCHMARK(BM_Episode500Steps)->Unit(benchmark::kMillisecond);

}  // namespace

// The packaged benchmark_main archive is LTO bytecode from another gcc, so supply main here.
BENCHMARK_MAIN();
