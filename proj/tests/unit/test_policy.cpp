#include <gtest/gtest.h>

#include <random>

#include "../support/oracles.hpp"
#include "fnav/policy.hpp"

namespace {

using namespace fnav;
using namespace fnav::policy;
using mapping::Occupancy;
using mapping::OccupancyGrid;
using mapping::ViewRecord;
using world::Pose;
namespace ft = fnav::testing;

// Known 10x10 block in a 40x40 world, walled corner, chair placed by the caller.
struct Setup {
  world::Scene scene;
  OccupancyGrid belief{40, 40, 0.1};
  std::vector<mapping::Frontier> frontiers;
  std::vector<ViewRecord> history;
};

Setup make_setup(Cell chair) {
  std::vector<std::string> rows(40, std::string(40, '.'));
  auto put = [&](Cell c, char ch) { rows[39 - c.row][c.col] = ch; };
  put({8, 9}, '#');
  put({9, 9}, '#');
  put({9, 8}, '#');
  put(chair, 'c');
  Setup s{ft::scene_from_ascii(rows, 0.1, {{'c', "chair"}}), OccupancyGrid(40, 40, 0.1), {}, {}};
  for (int r = 0; r < 10; ++r)
    for (int c = 0; c < 10; ++c) s.belief.set({c, r}, s.scene.blocked({c, r}) ? Occupancy::Obstacle : Occupancy::Free);
  s.frontiers = mapping::extract_frontiers(s.belief, 3);
  for (int i = 0; i < 6; ++i) s.history.push_back({i, Pose(0.25, 0.25, 30.0 * i)});
  return s;
}

mapping::Frontier fake_frontier(int id, double x) {
  mapping::Frontier f;
  f.id = id;
  f.cells = {{static_cast<int>(x / 0.1), 5}};
  f.waypoint_cell = f.cells.front();
  f.waypoint = {x + 0.05, 0.55};
  f.normal = {1, 0};
  f.boundary_dir = {0, 1};
  return f;
}

TEST(Prompt, SubsamplesFortyFramesToTwenty) {
  const auto idx = subsample_indices(40, 20);
  ASSERT_EQ(idx.size(), 20u);
  EXPECT_EQ(idx.front(), 0u);
  EXPECT_EQ(idx.back(), 39u);
  for (std::size_t i = 1; i < idx.size(); ++i) {
    EXPECT_GT(idx[i], idx[i - 1]);
    EXPECT_GE(idx[i] - idx[i - 1], 2u);
    EXPECT_LE(idx[i] - idx[i - 1], 3u);
  }
  EXPECT_EQ(subsample_indices(5, 20).size(), 5u);
}

TEST(Prompt, ChoicesFollowIdOrder) {
  OccupancyGrid g(40, 40, 0.1);
  const std::vector<mapping::Frontier> fs{fake_frontier(5, 2.0), fake_frontier(0, 1.0), fake_frontier(2, 3.0)};
  const std::vector<ViewRecord> history{{0, Pose(0.05, 0.55, 0)}};
  const auto s = build_prompt_sample(history, fs, world::ObjectNavGoal{"bed"}, g, {});
  ASSERT_EQ(s.choices.size(), 3u);
  EXPECT_EQ(s.letter_for(0), "A");
  EXPECT_EQ(s.letter_for(2), "B");
  EXPECT_EQ(s.letter_for(5), "C");
  EXPECT_EQ(s.instruction, "Find the bed.");
  EXPECT_FALSE(s.imagenav_goal.has_value());
}

TEST(Prompt, ImageNavGoalAndInstruction) {
  OccupancyGrid g(40, 40, 0.1);
  const std::vector<mapping::Frontier> fs{fake_frontier(0, 1.0)};
  const std::vector<ViewRecord> history{{0, Pose(0.05, 0.55, 0)}};
  const world::ImageNavGoal goal{Pose(2.5, 2.5, 90)};
  const auto s = build_prompt_sample(history, fs, goal, g, {});
  ASSERT_TRUE(s.imagenav_goal.has_value());
  EXPECT_EQ(s.imagenav_goal->pose, goal.goal_pose);
  EXPECT_EQ(s.instruction, "Go to the location shown in the goal image.");
}

TEST(Prompt, TooManyChoices) {
  OccupancyGrid g(400, 40, 0.1);
  std::vector<mapping::Frontier> fs;
  for (int i = 0; i < 27; ++i) fs.push_back(fake_frontier(i, 1.0 + i));
  const std::vector<ViewRecord> history{{0, Pose(0.05, 0.55, 0)}};
  try {
    build_prompt_sample(history, fs, world::ObjectNavGoal{"bed"}, g, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooManyChoices);
  }
}

TEST(Prompt, LetterBijectionAndFrameProvenance) {
  const auto setup = make_setup({25, 3});
  const auto s = build_prompt_sample(setup.history, setup.frontiers, world::ObjectNavGoal{"chair"}, setup.belief, {});
  std::set<int> ids;
  for (std::size_t i = 0; i < s.choices.size(); ++i) {
    EXPECT_EQ(s.choices[i].letter, std::string(1, static_cast<char>('A' + i)));
    ids.insert(s.choices[i].frontier_id);
    EXPECT_LE(s.choices[i].view.frame_index, setup.history.back().frame_index);
  }
  EXPECT_EQ(ids.size(), s.choices.size());
}

PolicyContext context(const Setup& s, const planning::GoalOracle* oracle) {
  return {&s.belief, Pose(0.25, 0.25, 0), s.frontiers, oracle};
}

TEST(Decide, ForcedMoveForEveryPolicy) {
  auto setup = make_setup({25, 3});
  setup.frontiers.resize(1);
  const planning::GoalOracle oracle(setup.scene, world::ObjectNavGoal{"chair"});
  const auto sample =
      build_prompt_sample(setup.history, setup.frontiers, world::ObjectNavGoal{"chair"}, setup.belief, {});
  for (const char* name : {"nearest", "random:3", "oracle", "greedy"}) {
    EXPECT_EQ(decide(parse_policy(name), sample, context(setup, &oracle)).letter, "A") << name;
  }
  StubServer stub({});
  stub.start();
  EXPECT_EQ(decide(parse_policy("external:" + stub.url()), sample, context(setup, &oracle)).letter, "A");
}

TEST(Decide, RandomIsDeterministic) {
  const auto setup = make_setup({25, 3});
  const auto sample =
      build_prompt_sample(setup.history, setup.frontiers, world::ObjectNavGoal{"chair"}, setup.belief, {});
  const auto p = parse_policy("random:7");
  EXPECT_EQ(p.seed, 7u);
  const auto a = decide(p, sample, context(setup, nullptr)).letter;
  for (int i = 0; i < 5; ++i) EXPECT_EQ(decide(p, sample, context(setup, nullptr)).letter, a);
}

TEST(Decide, OracleMatchesIndependentLabel) {
  for (const Cell chair : {Cell{25, 3}, Cell{3, 25}, Cell{5, 5}, Cell{30, 31}}) {
    const auto setup = make_setup(chair);
    const world::Task task = world::ObjectNavGoal{"chair"};
    const planning::GoalOracle oracle(setup.scene, task);
    const auto sample = build_prompt_sample(setup.history, setup.frontiers, task, setup.belief, {});
    const auto letter = decide(parse_policy("oracle"), sample, context(setup, &oracle)).letter;
    EXPECT_EQ(sample.frontier_for(letter), ft::relabel(setup.scene, setup.belief, {2, 2}, setup.frontiers, task));
  }
}

TEST(Decide, OracleInvariantToIdPermutation) {
  const auto setup = make_setup({25, 3});
  const world::Task task = world::ObjectNavGoal{"chair"};
  const planning::GoalOracle oracle(setup.scene, task);
  auto chosen_cells = [&](std::vector<mapping::Frontier> fs) {
    const auto sample = build_prompt_sample(setup.history, fs, task, setup.belief, {});
    const PolicyContext ctx{&setup.belief, Pose(0.25, 0.25, 0), fs, &oracle};
    const int id = sample.frontier_for(decide(parse_policy("oracle"), sample, ctx).letter);
    for (const auto& f : fs)
      if (f.id == id) return f.cells;
    return std::vector<Cell>{};
  };
  auto swapped = setup.frontiers;
  std::swap(swapped[0].id, swapped[1].id);
  EXPECT_EQ(chosen_cells(setup.frontiers), chosen_cells(swapped));
}

TEST(Decide, NearestPicksShortestBeliefPath) {
  const auto setup = make_setup({25, 3});
  const auto sample =
      build_prompt_sample(setup.history, setup.frontiers, world::ObjectNavGoal{"chair"}, setup.belief, {});
  // From the lower right of the known block the east frontier is closer.
  EXPECT_EQ(sample.frontier_for(nearest_choice(sample, setup.belief, Pose(0.85, 0.15, 0))), 0);
  EXPECT_EQ(sample.frontier_for(nearest_choice(sample, setup.belief, Pose(0.15, 0.75, 0))), 1);
}

TEST(ParsePolicy, Forms) {
  EXPECT_EQ(parse_policy("nearest").kind, PolicyKind::NearestFrontier);
  EXPECT_EQ(parse_policy("oracle").kind, PolicyKind::GroundTruthOracle);
  EXPECT_EQ(parse_policy("greedy").kind, PolicyKind::GreedyOracle);
  EXPECT_EQ(parse_policy("random").kind, PolicyKind::Random);
  const auto ext = parse_policy("external:http://127.0.0.1:9/act");
  EXPECT_EQ(ext.kind, PolicyKind::External);
  EXPECT_EQ(ext.url, "http://127.0.0.1:9/act");
  EXPECT_THROW(parse_policy("vlm"), Error);
}

PromptSample three_choices() {
  PromptSample s;
  s.instruction = "Find the sofa.";
  s.history = {{0, Pose(0.5, 0.5, 0)}, {1, Pose(0.75, 0.5, 0)}};
  for (int i = 0; i < 3; ++i) {
    s.choices.push_back({std::string(1, static_cast<char>('A' + i)), i * 2, s.history[1], Vec2{1.0 + i, 2.0}});
  }
  return s;
}

TEST(External, EchoStubReturnsFixedLetter) {
  StubServer::Options o;
  o.fixed_letter = "B";
  StubServer stub(o);
  stub.start();
  EXPECT_EQ(external_roundtrip(stub.url(), three_choices(), 2000).letter, "B");
  EXPECT_EQ(stub.requests(), 1u);
}

TEST(External, DebugLetterIsEchoed) {
  StubServer stub({});
  stub.start();
  EXPECT_EQ(external_roundtrip(stub.url(), three_choices(), 2000, std::string("C")).letter, "C");
}

TEST(External, LetterNotOfferedIsInvalidChoice) {
  StubServer::Options o;
  o.fixed_letter = "Z";
  StubServer stub(o);
  stub.start();
  try {
    external_roundtrip(stub.url(), three_choices(), 2000);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidChoice);
  }
}

TEST(External, SlowEndpointTimesOut) {
  StubServer::Options o;
  o.delay_ms = 1000;
  StubServer stub(o);
  stub.start();
  try {
    external_roundtrip(stub.url(), three_choices(), 100);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Timeout);
  }
}

TEST(External, Non2xxIsEndpointError) {
  StubServer::Options o;
  o.status = 503;
  StubServer stub(o);
  stub.start();
  try {
    external_roundtrip(stub.url(), three_choices(), 2000);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EndpointError);
  }
}

TEST(External, RefusedConnectionIsEndpointError) {
  int port = 0;
  {
    StubServer stub({});
    port = stub.port();
  }
  try {
    external_roundtrip("http://127.0.0.1:" + std::to_string(port) + "/act", three_choices(), 500);
    FAIL();
  } catch (const Error& e) {
    EXPECT_TRUE(e.code() == ErrorCode::EndpointError || e.code() == ErrorCode::Timeout);
  }
}

TEST(Wire, ReplyParsing) {
  const auto s = three_choices();
  EXPECT_EQ(parse_reply(R"({"letter":"B"})", s), "B");
  EXPECT_THROW(parse_reply("not json", s), Error);
  try {
    parse_reply(R"({"choice":"B"})", s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EndpointError);
  }
}

TEST(Wire, AnswerNeverSent) {
  auto s = three_choices();
  s.answer = "A";
  EXPECT_EQ(to_wire_json(s).find("answer"), std::string::npos);
  EXPECT_FALSE(from_wire_json(to_wire_json(s)).answer.has_value());
}

TEST(Wire, RandomSamplesRoundTrip) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-50.0, 50.0), h(0.0, 360.0);
  for (int k = 0; k < 200; ++k) {
    PromptSample s;
    s.kind = k % 2 ? world::TaskKind::ImageNav : world::TaskKind::ObjectNav;
    s.instruction = k % 2 ? "Go to the location shown in the goal image." : "Find the toilet.";
    const int frames = 1 + static_cast<int>(rng() % 20);
    for (int i = 0; i < frames; ++i) s.history.push_back({i * 3, Pose(u(rng), u(rng), h(rng))});
    if (k % 2) s.imagenav_goal = ViewRecord{kGoalFrameIndex, Pose(u(rng), u(rng), h(rng))};
    const int n = 1 + static_cast<int>(rng() % 26);
    for (int i = 0; i < n; ++i) {
      s.choices.push_back({std::string(1, static_cast<char>('A' + i)), static_cast<int>(rng() % 1000),
                           s.history[rng() % s.history.size()], Vec2{u(rng), u(rng)}});
    }
    EXPECT_EQ(from_wire_json(to_wire_json(s)), s) << "sample " << k;
  }
}

}  // namespace
