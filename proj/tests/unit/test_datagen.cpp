#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <sstream>

#include "../support/oracles.hpp"
#include "fnav/datagen.hpp"

namespace {

using namespace fnav;
using namespace fnav::datagen;
using world::Pose;
namespace fs = std::filesystem;

TEST(RelativeCoords, Examples) {
  const Vec2 a = relative_coords(Pose(1.5, -2.0, 77), {1.5, -2.0});
  EXPECT_NEAR(a.x, 0.0, 1e-12);
  EXPECT_NEAR(a.y, 0.0, 1e-12);
  const Vec2 b = relative_coords(Pose(0, 0, 0), {1, 0});
  EXPECT_NEAR(b.x, 1.0, 1e-12);
  EXPECT_NEAR(b.y, 0.0, 1e-12);
  // Hand-computed rotation by -90 degrees.
  const Vec2 c = relative_coords(Pose(0, 0, 90), {0, 1});
  EXPECT_NEAR(c.x, 1.0, 1e-12);
  EXPECT_NEAR(c.y, 0.0, 1e-12);
  const Vec2 d = relative_coords(Pose(0, 0, 90), {-1, 0});
  EXPECT_NEAR(d.x, 0.0, 1e-12);
  EXPECT_NEAR(d.y, 1.0, 1e-12);
}

TEST(RelativeCoords, InverseRoundTrip) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-20.0, 20.0), h(0.0, 360.0);
  for (int i = 0; i < 1000; ++i) {
    const Pose p(u(rng), u(rng), h(rng));
    const Vec2 t{u(rng), u(rng)};
    const Vec2 back = world_coords(p, relative_coords(p, t));
    EXPECT_NEAR(back.x, t.x, 1e-9);
    EXPECT_NEAR(back.y, t.y, 1e-9);
  }
}

TEST(AuxQuestion, Text) {
  EXPECT_EQ(aux_question({2.0, 0.0}), "Which part of the environment is located at (2.0,0.0)?");
  EXPECT_EQ(aux_question({-1.3, 0.7}), "Which part of the environment is located at (-1.3,0.7)?");
}

TEST(Aux, TwoMetersAheadQuery) {
  Trajectory t;
  t.episode.episode_id = "synthetic";
  t.frames = {{0, Pose(2.0, 0.0, 180)}, {1, Pose(0.0, 0.0, 0)}};
  AuxParams p;
  p.candidates = 2;
  p.samples_per_trajectory = 1;
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    t.episode.seed = seed;
    p.seed = seed;
    std::vector<TrainingSample> out;
    try {
      out = generate_aux_samples(t, p);
    } catch (const Error&) {
      continue;
    }
    for (const auto& s : out) {
      const auto& a = std::get<AuxSample>(s.body);
      for (const auto& c : a.candidates) {
        if (c.letter != s.answer || c.view.frame_index != 0) continue;
        ++hits;
        EXPECT_EQ(a.query_xy, (Vec2{2.0, 0.0}));
        EXPECT_EQ(a.question, "Which part of the environment is located at (2.0,0.0)?");
      }
    }
  }
  EXPECT_GT(hits, 0);
}

world::Scene test_scene() { return world::generate_scene(1234, {}); }

Trajectory test_rollout(std::uint64_t episode_seed = 5) {
  static const auto scene = test_scene();
  const auto ep = world::sample_episode(scene, episode_seed, world::TaskKind::ObjectNav);
  return rollout_and_record(scene, ep);
}

TEST(Aux, CandidatesSeparatedAndUnique) {
  const auto t = test_rollout();
  AuxParams p;
  p.samples_per_trajectory = 8;
  const auto samples = generate_aux_samples(t, p);
  ASSERT_FALSE(samples.empty());
  for (const auto& s : samples) {
    const auto& a = std::get<AuxSample>(s.body);
    ASSERT_EQ(a.candidates.size(), 4u);
    EXPECT_LE(a.history.size(), 20u);
    for (std::size_t i = 0; i < a.candidates.size(); ++i)
      for (std::size_t j = i + 1; j < a.candidates.size(); ++j)
        EXPECT_GE(distance(a.candidates[i].view.pose.position(), a.candidates[j].view.pose.position()), 1.0);
    // Inverse transform: exactly one candidate lies within tolerance of the query.
    const Vec2 q = world_coords(a.history.back().pose, a.query_xy);
    int matches = 0;
    std::string matched;
    for (const auto& c : a.candidates) {
      if (distance(c.view.pose.position(), q) <= 0.3) {
        ++matches;
        matched = c.letter;
      }
    }
    EXPECT_EQ(matches, 1);
    EXPECT_EQ(matched, s.answer);
  }
}

TEST(Aux, TooFewPositionsSkipped) {
  Trajectory t;
  t.frames = {{0, Pose(1, 1, 0)}, {1, Pose(1, 1, 30)}, {2, Pose(1, 1, 60)}};
  try {
    generate_aux_samples(t, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SkippedTrajectory);
  }
}

TEST(Rollout, LabelsSurviveReplay) {
  const auto scene = test_scene();
  for (std::uint64_t seed : {5u, 6u, 7u}) {
    const auto ep = world::sample_episode(scene, seed, world::TaskKind::ObjectNav);
    const auto t = rollout_and_record(scene, ep);
    ASSERT_FALSE(t.decisions.empty());
    int checked = 0;
    EXPECT_EQ(fnav::testing::replay_and_relabel(scene, t, &checked), 0);
    EXPECT_EQ(checked, static_cast<int>(t.decisions.size()));
    for (const auto& d : t.decisions) EXPECT_LE(d.sample.history.size(), 20u);
  }
}

TEST(Rollout, PerStepLabelsSurviveReplay) {
  const auto scene = test_scene();
  const auto ep = world::sample_episode(scene, 8, world::TaskKind::ImageNav);
  RolloutConfig cfg;
  cfg.per_step = true;
  const auto t = rollout_and_record(scene, ep, cfg);
  EXPECT_EQ(fnav::testing::replay_and_relabel(scene, t), 0);
}

TEST(Rollout, Deterministic) {
  const auto a = navigation_samples(test_rollout(9), SampleKind::ObjectNav);
  const auto b = navigation_samples(test_rollout(9), SampleKind::ObjectNav);
  EXPECT_EQ(a, b);
  ASSERT_FALSE(a.empty());
  EXPECT_THROW(navigation_samples(test_rollout(9), SampleKind::AuxSpatial), Error);
}

TEST(Samples, JsonRoundTrip) {
  const auto t = test_rollout();
  auto samples = navigation_samples(t, SampleKind::ObjectNav);
  const auto aux = generate_aux_samples(t, {});
  samples.insert(samples.end(), aux.begin(), aux.end());
  for (const auto& s : samples) EXPECT_EQ(sample_from_json(sample_to_json(s)), s);
}

TEST(Mixture, DefaultRatioAtOneHundredth) {
  const auto m = MixtureConfig::default_ratio(0.01);
  EXPECT_EQ(m.counts.at(SampleKind::ObjectNav), 260);
  EXPECT_EQ(m.counts.at(SampleKind::Ovon), 260);
  EXPECT_EQ(m.counts.at(SampleKind::ImageNav), 400);
  EXPECT_EQ(m.counts.at(SampleKind::AuxSpatial), 300);
  EXPECT_EQ(MixtureConfig::parse("objectnav=260,ovon=260,imagenav=400,aux=300").counts, m.counts);
  EXPECT_THROW(MixtureConfig::parse("objectnav=-1"), Error);
}

std::size_t line_count(const fs::path& p) {
  std::istringstream in(read_file(p));
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) ++n;
  return n;
}

TEST(WriteDataset, CountsDeterminismAndRoundTrip) {
  // Streams are synthetic copies so the test stays fast; only the writer is under test.
  const auto t = test_rollout();
  const auto nav = navigation_samples(t, SampleKind::ObjectNav);
  const auto aux = generate_aux_samples(t, {});
  std::map<SampleKind, std::vector<TrainingSample>> streams;
  for (const auto kind : kAllSampleKinds) {
    const auto& src = kind == SampleKind::AuxSpatial ? aux : nav;
    for (int i = 0; i < 400; ++i) {
      auto s = src[static_cast<std::size_t>(i) % src.size()];
      s.kind = kind;
      if (auto* p = std::get_if<policy::PromptSample>(&s.body)) {
        p->kind = kind == SampleKind::ImageNav ? world::TaskKind::ImageNav : world::TaskKind::ObjectNav;
      }
      s.sample_id = std::string(to_string(kind)) + "_" + std::to_string(i);
      streams[kind].push_back(std::move(s));
    }
  }
  const auto mixture = MixtureConfig::default_ratio(0.01, 5);
  const fs::path root = fs::temp_directory_path() / "fnav_write_dataset_test";
  fs::remove_all(root);
  const auto m1 = write_dataset(streams, mixture, root / "a");
  const auto m2 = write_dataset(streams, mixture, root / "b");
  EXPECT_EQ(line_count(root / "a" / "objectnav.jsonl"), 260u);
  EXPECT_EQ(line_count(root / "a" / "ovon.jsonl"), 260u);
  EXPECT_EQ(line_count(root / "a" / "imagenav.jsonl"), 400u);
  EXPECT_EQ(line_count(root / "a" / "aux_spatial.jsonl"), 300u);
  EXPECT_EQ(line_count(root / "a" / "combined.jsonl"), 1220u);
  for (const char* f : {"objectnav.jsonl", "ovon.jsonl", "imagenav.jsonl", "aux_spatial.jsonl", "combined.jsonl",
                        "manifest.json"}) {
    EXPECT_EQ(read_file(root / "a" / f), read_file(root / "b" / f)) << f;
  }
  EXPECT_EQ(m1.file_sha256, m2.file_sha256);

  std::istringstream in(read_file(root / "a" / "imagenav.jsonl"));
  std::string line;
  for (int i = 0; std::getline(in, line); ++i) EXPECT_EQ(sample_from_json(line), streams[SampleKind::ImageNav][i]);
  fs::remove_all(root);
}

TEST(WriteDataset, ShortStreamIsTruncated) {
  const auto nav = navigation_samples(test_rollout(), SampleKind::ObjectNav);
  std::map<SampleKind, std::vector<TrainingSample>> streams{{SampleKind::ObjectNav, nav}};
  MixtureConfig m;
  m.counts = {{SampleKind::ObjectNav, 100000}};
  const fs::path root = fs::temp_directory_path() / "fnav_truncate_test";
  const auto manifest = write_dataset(streams, m, root);
  EXPECT_EQ(manifest.counts.at(SampleKind::ObjectNav), static_cast<int>(nav.size()));
  EXPECT_EQ(manifest.requested.at(SampleKind::ObjectNav), 100000);
  fs::remove_all(root);
}

TEST(Streams, OvonUsesUnseenVocabulary) {
  world::SceneParams sp;
  sp.categories = {"chair", "bed", "bookshelf", "sink"};
  std::vector<world::Scene> scenes{world::generate_scene(50, sp), world::generate_scene(51, sp)};
  DatasetConfig cfg;
  cfg.mixture.counts = {{SampleKind::ObjectNav, 6}, {SampleKind::Ovon, 6}};
  const auto streams = generate_streams(scenes, cfg);
  const std::set<std::string> seen(cfg.seen_categories.begin(), cfg.seen_categories.end());
  const std::set<std::string> unseen(cfg.unseen_categories.begin(), cfg.unseen_categories.end());
  for (const auto& [kind, list] : streams) {
    for (const auto& s : list) {
      const auto& p = std::get<policy::PromptSample>(s.body);
      const std::string cat = p.instruction.substr(9, p.instruction.size() - 10);  // "Find the X."
      if (kind == SampleKind::ObjectNav) EXPECT_TRUE(seen.count(cat)) << cat;
      if (kind == SampleKind::Ovon) EXPECT_TRUE(unseen.count(cat)) << cat;
    }
  }
  EXPECT_EQ(streams.at(SampleKind::ObjectNav).size(), 6u);
  EXPECT_EQ(streams.at(SampleKind::Ovon).size(), 6u);
}

}  // namespace
