#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "fnav/harness.hpp"
#include "fnav/snapshot.hpp"

namespace fnav::harness {

std::string ReplanTrigger::to_string() const {
  switch (mode) {
    case Mode::OnChangeOrArrival: return "arrival";
    case Mode::EveryStep: return "step";
    case Mode::EveryNSteps: return "n:" + std::to_string(n);
  }
  return "arrival";
}

ReplanTrigger parse_replan(const std::string& text) {
  if (text == "arrival") return {};
  if (text == "step") return {ReplanTrigger::Mode::EveryStep, 1};
  if (text.starts_with("n:")) {
    int n = 0;
    try {
      std::size_t used = 0;
      n = std::stoi(text.substr(2), &used);
      if (used != text.size() - 2) n = 0;
    } catch (const std::exception&) {
      n = 0;
    }
    if (n >= 1) return {ReplanTrigger::Mode::EveryNSteps, n};
  }
  throw Error(ErrorCode::InvalidArgument, "replan trigger must be arrival, step or n:K (K >= 1), got '" + text + "'");
}

void RuntimeConfig::validate() const {
  sensor.validate();
  action.validate();
  prompt.validate();
  if (replan.mode == ReplanTrigger::Mode::EveryNSteps && replan.n < 1) {
    throw Error(ErrorCode::InvalidArgument, "replan n must be >= 1");
  }
  if (min_frontier_cells < 1) throw Error(ErrorCode::InvalidArgument, "min_frontier_cells must be >= 1");
  if (!(arrival_tolerance > 0.0)) throw Error(ErrorCode::InvalidArgument, "arrival_tolerance must be > 0");
  if (max_consecutive_stuck < 1) throw Error(ErrorCode::InvalidArgument, "max_consecutive_stuck must be >= 1");
  if (stop_radius && !(*stop_radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "stop_radius must be > 0");
}

std::string RuntimeConfig::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "sensor=" << sensor.num_rays << ',' << sensor.fov << ',' << sensor.max_range << ',' << sensor.detect_range
     << ";action=" << action.forward_step << ',' << action.turn_step << ";controller=" << controller.inflate_radius
     << ',' << controller.lookahead << ";prompt=" << prompt.max_history_frames << ',' << prompt.letters
     << ";replan=" << replan.to_string() << ";min_frontier_cells=" << min_frontier_cells
     << ";arrival=" << arrival_tolerance << ";detection=" << detection << ";geodesic_success=" << geodesic_success
     << ";max_stuck=" << max_consecutive_stuck;
  if (stop_radius) os << ";stop_radius=" << *stop_radius;
  return os.str();
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::StoppedSuccess: return "stopped_success";
    case Termination::StoppedFar: return "stopped_far";
    case Termination::Timeout: return "timeout";
    case Termination::Stuck: return "stuck";
  }
  return "unknown";
}

double EpisodeResult::spl_term() const {
  if (!success) return 0.0;
  const double denom = std::max(agent_path_length, shortest_path_length);
  return denom > 0.0 ? shortest_path_length / denom : 1.0;
}

namespace {

bool is_policy_failure(const Error& e) {
  return e.code() == ErrorCode::Timeout || e.code() == ErrorCode::EndpointError ||
         e.code() == ErrorCode::InvalidChoice;
}

/// One episode's mutable state; run() drives the loop.
class EpisodeRunner {
 public:
  EpisodeRunner(const world::Scene& scene, const world::EpisodeSpec& episode, const policy::PolicySpec& policy,
                const RuntimeConfig& cfg, const DecisionObserver& observer)
      : scene_(scene),
        episode_(episode),
        policy_(policy),
        cfg_(cfg),
        observer_(observer),
        oracle_(scene, episode.task),
        belief_(mapping::OccupancyGrid::for_scene(scene)),
        tracker_(cfg.min_frontier_cells),
        pose_(episode.start) {}

  EpisodeResult run() {
    result_.episode_id = episode_.episode_id;
    result_.shortest_path_length = oracle_.distance(scene_.cell_of(pose_.position()));

    for (int step = 0; step < episode_.max_steps; ++step) {
      step_ = step;
      observe();
      const std::optional<world::Action> action = choose_action();
      if (!action) {
        result_.termination = Termination::Stuck;
        result_.steps = step;
        return std::move(result_);
      }
      const auto outcome = world::apply_action(pose_, *action, scene_, cfg_.action);
      result_.actions.push_back(*action);
      result_.agent_path_length += outcome.translation;
      if (outcome.collided) ++result_.collisions;
      pose_ = outcome.pose;
      if (*action == world::Action::Stop) {
        result_.steps = step + 1;
        result_.success = stop_succeeds();
        result_.termination = result_.success ? Termination::StoppedSuccess : Termination::StoppedFar;
        return std::move(result_);
      }
    }
    result_.steps = episode_.max_steps;
    result_.termination = Termination::Timeout;
    return std::move(result_);
  }

 private:
  void observe() {
    mapping::integrate_scan(belief_, world::raycast_depth(scene_, pose_, cfg_.sensor));
    history_.push_back({step_, pose_});
    frontiers_ = tracker_.update(belief_);
    if (cfg_.snapshot_dir) {
      mapping::write_snapshot(*cfg_.snapshot_dir, episode_.episode_id, step_, belief_, frontiers_, pose_.position());
    }
    if (cfg_.detection) {
      // Keep the latched point unless the new sighting is closer; a target that flips with the
      // heading would make the controller oscillate.
      const auto seen = world::oracle_detect_goal(scene_, pose_, episode_.task, cfg_.sensor);
      if (seen && (!detected_ || distance(pose_.position(), *seen) < distance(pose_.position(), *detected_))) {
        detected_ = seen;
      }
    }
  }

  bool stop_succeeds() const {
    if (cfg_.geodesic_success) {
      const Cell c = scene_.cell_of(pose_.position());
      return oracle_.reachable(c) && oracle_.distance(c) <= episode_.success_radius;
    }
    return world::distance_to_goal(scene_, episode_.task, pose_.position()) <= episode_.success_radius;
  }

  std::optional<world::Action> choose_action() {
    if (detected_) {
      const double stop_at = cfg_.stop_radius.value_or(episode_.success_radius);
      if (distance(pose_.position(), *detected_) <= stop_at) return world::Action::Stop;
      if (const auto a = controller_step(approach_point(*detected_))) return a;
      if (stuck_ >= cfg_.max_consecutive_stuck) return std::nullopt;
      // The detected point cannot be reached in belief yet; keep exploring until it can.
      detected_.reset();
    }
    return frontier_action();
  }

  /// A point just off the detected goal surface, on the agent's side, that is not a known obstacle.
  Vec2 approach_point(Vec2 goal) const {
    const Vec2 dir = (pose_.position() - goal).normalized();
    for (int k = 1; k <= 8; ++k) {
      const Vec2 p = goal + dir * (0.05 * k);
      const Cell c = belief_.cell_of(p);
      if (belief_.in_bounds(c) && belief_.at(c) != mapping::Occupancy::Obstacle) return p;
    }
    return pose_.position();
  }

  std::optional<world::Action> controller_step(Vec2 target) {
    try {
      const auto a = planning::local_controller_step(belief_, pose_, target, cfg_.action, cfg_.controller);
      stuck_ = 0;
      return a;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ControllerStuck) throw;
      ++stuck_;
      ++result_.fallbacks;
      return std::nullopt;
    }
  }

  const mapping::Frontier* find_frontier(int id) const {
    for (const auto& f : frontiers_)
      if (f.id == id) return &f;
    return nullptr;
  }

  std::vector<mapping::Frontier> offered_frontiers() const {
    std::vector<mapping::Frontier> offered;
    for (const auto& f : frontiers_)
      if (!exhausted_.contains(f.id)) offered.push_back(f);
    if (offered.empty()) offered = frontiers_;
    const std::size_t cap = cfg_.prompt.letters.size();
    if (offered.size() > cap) {
      // Too many to letter: keep the closest ones.
      const auto ranked =
          planning::rank_frontiers_by_distance(belief_, belief_.cell_of(pose_.position()), offered);
      std::set<int> keep(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(std::min(cap, ranked.size())));
      std::erase_if(offered, [&](const mapping::Frontier& f) { return !keep.contains(f.id); });
    }
    return offered;
  }

  bool replan_due(const std::vector<int>& ids, bool new_arrival) const {
    if (!chosen_ || find_frontier(*chosen_) == nullptr) return true;
    switch (cfg_.replan.mode) {
      case ReplanTrigger::Mode::EveryStep: return true;
      case ReplanTrigger::Mode::EveryNSteps: return step_ - last_decision_step_ >= cfg_.replan.n || new_arrival;
      case ReplanTrigger::Mode::OnChangeOrArrival: return ids != last_ids_ || new_arrival;
    }
    return true;
  }

  void consult_policy() {
    const std::vector<mapping::Frontier> offered = offered_frontiers();
    const auto sample =
        policy::build_prompt_sample(history_, offered, episode_.task, belief_, cfg_.sensor, cfg_.prompt);
    const policy::PolicyContext ctx{&belief_, pose_, offered, &oracle_};

    DecisionLog log;
    log.step = step_;
    for (const auto& c : sample.choices) log.offered.push_back(c.frontier_id);
    try {
      log.letter = policy::decide(policy_, sample, ctx).letter;
    } catch (const Error& e) {
      if (!is_policy_failure(e)) throw;
      log.letter = policy::nearest_choice(sample, belief_, pose_);
      log.fallback = true;
      log.note = e.what();
      ++result_.fallbacks;
    }
    log.frontier_id = sample.frontier_for(log.letter);
    chosen_ = log.frontier_id;
    last_decision_step_ = step_;
    if (observer_) observer_({step_, &sample, offered, &belief_, pose_, log.frontier_id});
    result_.decisions.push_back(std::move(log));
  }

  /// Next-best frontier after the controller failed on the current one.
  bool fall_back_to_nearest() {
    exhausted_.insert(*chosen_);
    std::vector<mapping::Frontier> rest;
    for (const auto& f : frontiers_)
      if (!exhausted_.contains(f.id)) rest.push_back(f);
    const auto ranked = planning::rank_frontiers_by_distance(belief_, belief_.cell_of(pose_.position()), rest);
    if (ranked.empty()) return false;
    chosen_ = ranked.front();
    result_.decisions.push_back({step_, "", *chosen_, {}, true, "controller stuck; nearest frontier fallback"});
    return true;
  }

  std::optional<world::Action> frontier_action() {
    std::erase_if(exhausted_, [&](int id) { return find_frontier(id) == nullptr; });
    if (frontiers_.empty()) return std::nullopt;

    std::vector<int> ids;
    for (const auto& f : frontiers_) ids.push_back(f.id);
    const mapping::Frontier* current = chosen_ ? find_frontier(*chosen_) : nullptr;
    const bool arrived = current != nullptr && distance(pose_.position(), current->waypoint) <= cfg_.arrival_tolerance;
    const bool new_arrival = arrived && !was_arrived_;
    if (replan_due(ids, new_arrival)) consult_policy();
    last_ids_ = std::move(ids);

    // Standing on the waypoint: face into the unknown. If that is already done and the frontier
    // survived, it cannot be cleared from here; set it aside and pick again.
    for (int round = 0; round < 2; ++round) {
      const mapping::Frontier* f = find_frontier(*chosen_);
      if (distance(pose_.position(), f->waypoint) > cfg_.arrival_tolerance) break;
      was_arrived_ = true;
      const double err =
          signed_degrees(rad_to_deg(std::atan2(f->normal.y, f->normal.x)) - pose_.heading);
      if (std::abs(err) > cfg_.action.turn_step / 2.0) {
        return err > 0.0 ? world::Action::TurnLeft : world::Action::TurnRight;
      }
      exhausted_.insert(*chosen_);
      if (round == 0) {
        consult_policy();
      } else if (!planning::forward_blocked_in_belief(belief_, pose_, cfg_.action.forward_step)) {
        return world::Action::Forward;
      } else {
        return world::Action::TurnLeft;
      }
    }
    was_arrived_ = false;

    while (true) {
      // Revisiting the same pose on the way to the same frontier means the controller is cycling
      // (the step lattice can straddle a narrow gap); treat that like a stuck controller.
      if (++visits_[pose_key(*chosen_)] > kMaxPoseVisits) {
        ++result_.fallbacks;
        if (!fall_back_to_nearest()) return std::nullopt;
        continue;
      }
      if (const auto a = controller_step(find_frontier(*chosen_)->waypoint)) return a;
      if (stuck_ >= cfg_.max_consecutive_stuck || !fall_back_to_nearest()) return std::nullopt;
    }
  }

  static constexpr int kMaxPoseVisits = 3;

  std::tuple<long long, long long, long long, int> pose_key(int frontier) const {
    auto q = [](double v) { return std::llround(v * 1e4); };
    return {q(pose_.x), q(pose_.y), q(normalize_degrees(pose_.heading)), frontier};
  }

  const world::Scene& scene_;
  const world::EpisodeSpec& episode_;
  const policy::PolicySpec& policy_;
  const RuntimeConfig& cfg_;
  const DecisionObserver& observer_;
  planning::GoalOracle oracle_;

  mapping::OccupancyGrid belief_;
  mapping::FrontierTracker tracker_;
  std::vector<mapping::ViewRecord> history_;
  std::vector<mapping::Frontier> frontiers_;
  world::Pose pose_;
  int step_ = 0;

  std::optional<Vec2> detected_;
  std::optional<int> chosen_;
  std::vector<int> last_ids_;
  int last_decision_step_ = -1;
  bool was_arrived_ = false;
  std::set<int> exhausted_;
  std::map<std::tuple<long long, long long, long long, int>, int> visits_;
  int stuck_ = 0;
  EpisodeResult result_;
};

}  // namespace

EpisodeResult run_episode(const world::Scene& scene, const world::EpisodeSpec& episode,
                          const policy::PolicySpec& policy, const RuntimeConfig& cfg,
                          const DecisionObserver& observer) {
  cfg.validate();
  if (episode.scene_id != scene.id()) {
    throw Error(ErrorCode::InvalidArgument, "episode " + episode.episode_id + " belongs to scene " + episode.scene_id);
  }
  if (episode.max_steps < 1) throw Error(ErrorCode::InvalidArgument, "max_steps must be >= 1");
  return EpisodeRunner(scene, episode, policy, cfg, observer).run();
}

}  // namespace fnav::harness
