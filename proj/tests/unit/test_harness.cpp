#include <gtest/gtest.h>

#include "../support/oracles.hpp"
#include "fnav/harness.hpp"

namespace {

using namespace fnav;
using namespace fnav::harness;
using world::Pose;

EpisodeResult result(bool success, double shortest, double travelled) {
  EpisodeResult r;
  r.success = success;
  r.shortest_path_length = shortest;
  r.agent_path_length = travelled;
  return r;
}

TEST(Metrics, Identity) {
  const std::vector<EpisodeResult> rs{result(true, 4.0, 4.0)};
  EXPECT_NEAR(compute_spl(rs), 1.0, 1e-12);
  EXPECT_NEAR(compute_sr(rs), 1.0, 1e-12);
}

TEST(Metrics, HalfEfficiency) {
  const std::vector<EpisodeResult> rs{result(true, 4.0, 8.0)};
  EXPECT_NEAR(compute_spl(rs), 0.5, 1e-12);
}

TEST(Metrics, MixedPair) {
  const std::vector<EpisodeResult> rs{result(true, 4.0, 8.0), result(false, 4.0, 2.0)};
  EXPECT_NEAR(compute_sr(rs), 0.5, 1e-12);
  EXPECT_NEAR(compute_spl(rs), 0.25, 1e-12);
}

TEST(Metrics, MaxClamp) {
  const std::vector<EpisodeResult> rs{result(true, 4.0, 3.0)};
  EXPECT_NEAR(compute_spl(rs), 1.0, 1e-12);
}

TEST(Metrics, EmptyIsAnError) {
  try {
    compute_spl({});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyBenchmark);
  }
  EXPECT_THROW(compute_sr({}), Error);
}

TEST(Replan, Parse) {
  EXPECT_EQ(parse_replan("arrival").mode, ReplanTrigger::Mode::OnChangeOrArrival);
  EXPECT_EQ(parse_replan("step").mode, ReplanTrigger::Mode::EveryStep);
  const auto n = parse_replan("n:4");
  EXPECT_EQ(n.mode, ReplanTrigger::Mode::EveryNSteps);
  EXPECT_EQ(n.n, 4);
  EXPECT_THROW(parse_replan("sometimes"), Error);
}

struct Fixture : ::testing::Test {
  static const world::Scene& scene() {
    static const auto s = world::generate_scene(77, {});
    return s;
  }
  static world::EpisodeSpec episode(std::uint64_t seed = 1, world::TaskKind kind = world::TaskKind::ObjectNav) {
    return world::sample_episode(scene(), seed, kind);
  }
};

using RunEpisode = Fixture;

TEST_F(RunEpisode, OracleSucceedsWithinCap) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    for (const auto kind : {world::TaskKind::ObjectNav, world::TaskKind::ImageNav}) {
      const auto r = run_episode(scene(), episode(seed, kind), policy::parse_policy("oracle"));
      EXPECT_EQ(r.termination, Termination::StoppedSuccess) << seed;
      EXPECT_TRUE(r.success);
      EXPECT_LE(r.steps, 500);
      EXPECT_GT(r.spl_term(), 0.0);
      EXPECT_LE(r.spl_term(), 1.0);
    }
  }
}

TEST_F(RunEpisode, NeverStoppingTimesOut) {
  // Detection off on a many-room scene: a wandering policy never runs out of frontiers nor stops.
  world::SceneParams p;
  p.width = p.height = 128;
  p.room_count_range = {9, 11};
  p.room_size_range = {16, 26};
  const auto big = world::generate_scene(3, p);
  const auto ep = world::sample_episode(big, 1, world::TaskKind::ObjectNav);
  RuntimeConfig cfg;
  cfg.detection = false;
  const auto r = run_episode(big, ep, policy::parse_policy("random:1"), cfg);
  EXPECT_EQ(r.termination, Termination::Timeout);
  EXPECT_EQ(r.steps, 500);
  EXPECT_FALSE(r.success);
  EXPECT_EQ(r.actions.size(), 500u);
}

TEST_F(RunEpisode, StoppingFarFromGoalFails) {
  // Stop as soon as the goal is seen within 3.2 m, well outside the 1 m success radius.
  RuntimeConfig cfg;
  cfg.stop_radius = 3.2;
  int far = 0;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto ep = episode(seed);
    const auto r = run_episode(scene(), ep, policy::parse_policy("oracle"), cfg);
    ASSERT_EQ(r.actions.back(), world::Action::Stop);
    Pose end = ep.start;
    for (const auto a : r.actions) end = world::apply_action(end, a, scene(), cfg.action).pose;
    const double d = world::distance_to_goal(scene(), ep.task, end.position());
    EXPECT_EQ(r.success, d <= ep.success_radius);
    if (r.termination == Termination::StoppedFar) {
      ++far;
      EXPECT_FALSE(r.success);
      EXPECT_EQ(r.spl_term(), 0.0);
    }
  }
  EXPECT_GT(far, 0);
}

TEST_F(RunEpisode, GeodesicSuccessMode) {
  RuntimeConfig cfg;
  cfg.geodesic_success = true;
  const auto r = run_episode(scene(), episode(3), policy::parse_policy("oracle"), cfg);
  EXPECT_EQ(r.termination, Termination::StoppedSuccess);
}

TEST_F(RunEpisode, DecisionsReferToExtractedFrontiers) {
  const auto ep = episode(4);
  int calls = 0;
  auto observer = [&](const DecisionPoint& d) {
    ++calls;
    for (const auto& c : d.sample->choices) {
      bool found = false;
      for (const auto& f : d.frontiers) found = found || f.id == c.frontier_id;
      EXPECT_TRUE(found);
      EXPECT_LE(c.view.frame_index, d.step);
    }
    for (const auto& h : d.sample->history) EXPECT_LE(h.frame_index, d.step);
  };
  RuntimeConfig cfg;
  cfg.replan = parse_replan("step");
  const auto r = run_episode(scene(), ep, policy::parse_policy("nearest"), cfg, observer);
  EXPECT_GT(calls, 0);
  for (const auto& d : r.decisions) {
    if (d.offered.empty()) continue;  // controller fallbacks carry no letter
    EXPECT_NE(std::find(d.offered.begin(), d.offered.end(), d.frontier_id), d.offered.end());
  }
}

TEST_F(RunEpisode, EndpointTimeoutFallsBackToNearest) {
  policy::StubServer::Options o;
  o.delay_ms = 300;
  policy::StubServer stub(o);
  stub.start();
  auto ep = episode(5);
  ep.max_steps = 6;
  auto spec = policy::parse_policy("external:" + stub.url());
  spec.timeout_ms = 50;
  const auto r = run_episode(scene(), ep, spec);
  ASSERT_FALSE(r.decisions.empty());
  EXPECT_TRUE(r.decisions.front().fallback);
  EXPECT_NE(r.decisions.front().note.find("Timeout"), std::string::npos);
  EXPECT_GE(r.fallbacks, 1);
}

TEST_F(RunEpisode, WrongSceneRejected) {
  auto ep = episode(1);
  ep.scene_id = "elsewhere";
  EXPECT_THROW(run_episode(scene(), ep, policy::parse_policy("nearest")), Error);
}

TEST(Benchmark, DeterministicReportAndBounds) {
  std::vector<world::Scene> scenes{world::generate_scene(1, {}), world::generate_scene(2, {})};
  BenchmarkConfig cfg;
  cfg.episodes_per_scene = 2;
  const std::vector<policy::PolicySpec> pols{policy::parse_policy("nearest"), policy::parse_policy("oracle"),
                                             policy::parse_policy("random:4")};
  const auto a = run_benchmark(scenes, pols, cfg);
  cfg.threads = 2;
  const auto b = run_benchmark(scenes, pols, cfg);
  EXPECT_EQ(report_to_json(a), report_to_json(b));
  for (const auto& p : a.policies) {
    EXPECT_EQ(p.episode_count, 4);
    EXPECT_GE(p.spl, 0.0);
    EXPECT_LE(p.spl, p.sr + 1e-12);
    EXPECT_LE(p.sr, 1.0);
    for (const auto& e : p.episodes) EXPECT_LE(e.spl_term(), 1.0);
  }
  EXPECT_NE(report_to_table(a).find("oracle"), std::string::npos);
}

TEST(Benchmark, NoEpisodesIsAnError) {
  std::vector<world::Scene> scenes{world::generate_scene(1, {})};
  BenchmarkConfig cfg;
  cfg.episodes_per_scene = 0;
  const std::vector<policy::PolicySpec> pols{policy::parse_policy("nearest")};
  try {
    run_benchmark(scenes, pols, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyBenchmark);
  }
}

}  // namespace
