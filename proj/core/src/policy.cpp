#include <chrono>
#include <limits>

#include "fnav/policy.hpp"

namespace fnav::policy {

std::string PolicySpec::name() const {
  switch (kind) {
    case PolicyKind::NearestFrontier: return "nearest";
    case PolicyKind::Random: return "random:" + std::to_string(seed);
    case PolicyKind::GroundTruthOracle: return "oracle";
    case PolicyKind::GreedyOracle: return "greedy";
    case PolicyKind::External: return "external:" + url;
  }
  return "unknown";
}

PolicySpec parse_policy(const std::string& text) {
  PolicySpec p;
  if (text == "nearest") {
    p.kind = PolicyKind::NearestFrontier;
  } else if (text == "oracle") {
    p.kind = PolicyKind::GroundTruthOracle;
  } else if (text == "greedy") {
    p.kind = PolicyKind::GreedyOracle;
  } else if (text == "random" || text.starts_with("random:")) {
    p.kind = PolicyKind::Random;
    if (text.size() > 7) {
      try {
        std::size_t used = 0;
        p.seed = std::stoull(text.substr(7), &used);
        if (used != text.size() - 7) throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        throw Error(ErrorCode::InvalidArgument, "bad random seed in '" + text + "'");
      }
    }
  } else if (text.starts_with("external:") && text.size() > 9) {
    p.kind = PolicyKind::External;
    p.url = text.substr(9);
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown policy '" + text + "'");
  }
  return p;
}

std::string nearest_choice(const PromptSample& sample, const mapping::OccupancyGrid& belief,
                           const world::Pose& agent) {
  if (sample.choices.empty()) throw Error(ErrorCode::InvalidArgument, "sample has no choices");
  const Cell sources[] = {belief.cell_of(agent.position())};
  const planning::DistanceField field(planning::Traversability::from_belief(belief, planning::UnknownAs::Free),
                                     sources);
  const Choice* best = nullptr;
  double best_d = std::numeric_limits<double>::infinity();
  for (const auto& c : sample.choices) {
    const double d = field.meters(belief.cell_of(c.waypoint));
    if (best == nullptr || d < best_d || (d == best_d && c.frontier_id < best->frontier_id)) {
      best = &c;
      best_d = d;
    }
  }
  return best->letter;
}

std::string random_choice(const PromptSample& sample, std::uint64_t seed) {
  if (sample.choices.empty()) throw Error(ErrorCode::InvalidArgument, "sample has no choices");
  const std::uint64_t frame = sample.history.empty() ? 0 : static_cast<std::uint64_t>(sample.history.back().frame_index);
  std::mt19937_64 rng(mix_seed(seed, frame));
  return sample.choices[uniform_index(rng, sample.choices.size())].letter;
}

std::string oracle_choice(const PromptSample& sample, const PolicyContext& ctx) {
  if (ctx.oracle == nullptr || ctx.belief == nullptr) {
    throw Error(ErrorCode::InvalidArgument, "oracle policy needs the scene oracle and the belief grid");
  }
  const Cell agent = ctx.belief->cell_of(ctx.agent.position());
  const int id = planning::label_correct_frontier(*ctx.oracle, *ctx.belief, agent, ctx.frontiers);
  return sample.letter_for(id);
}

PolicyDecision decide(const PolicySpec& policy, const PromptSample& sample, const PolicyContext& ctx) {
  const auto t0 = std::chrono::steady_clock::now();
  PolicyDecision d;
  switch (policy.kind) {
    case PolicyKind::NearestFrontier:
      if (ctx.belief == nullptr) throw Error(ErrorCode::InvalidArgument, "nearest policy needs the belief grid");
      d.letter = nearest_choice(sample, *ctx.belief, ctx.agent);
      break;
    case PolicyKind::Random:
      d.letter = random_choice(sample, policy.seed);
      break;
    case PolicyKind::GroundTruthOracle:
      d.letter = oracle_choice(sample, ctx);
      break;
    case PolicyKind::GreedyOracle:
      if (ctx.oracle == nullptr || ctx.belief == nullptr) {
        throw Error(ErrorCode::InvalidArgument, "greedy oracle needs the scene oracle and the belief grid");
      }
      d.letter = sample.letter_for(
          planning::greedy_oracle_step(*ctx.oracle, *ctx.belief, ctx.agent, ctx.frontiers, policy.oracle));
      break;
    case PolicyKind::External: {
      std::optional<std::string> debug;
      if (policy.expose_labels) debug = oracle_choice(sample, ctx);
      return external_roundtrip(policy.url, sample, policy.timeout_ms, debug);
    }
  }
  d.latency_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return d;
}

}  // namespace fnav::policy
