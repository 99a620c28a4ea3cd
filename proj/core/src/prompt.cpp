#include <algorithm>
#include <cmath>
#include <set>

#include "fnav/policy.hpp"

namespace fnav::policy {

void PromptConfig::validate() const {
  if (max_history_frames < 1) throw Error(ErrorCode::InvalidArgument, "max_history_frames must be >= 1");
  if (letters.empty()) throw Error(ErrorCode::InvalidArgument, "letter alphabet is empty");
  if (std::set<char>(letters.begin(), letters.end()).size() != letters.size()) {
    throw Error(ErrorCode::InvalidArgument, "letter alphabet has duplicates");
  }
}

const std::string& PromptSample::letter_for(int frontier_id) const {
  for (const auto& c : choices)
    if (c.frontier_id == frontier_id) return c.letter;
  throw Error(ErrorCode::InvalidChoice, "frontier " + std::to_string(frontier_id) + " is not among the choices");
}

int PromptSample::frontier_for(const std::string& letter) const {
  for (const auto& c : choices)
    if (c.letter == letter) return c.frontier_id;
  throw Error(ErrorCode::InvalidChoice, "letter '" + letter + "' is not among the choices");
}

bool PromptSample::has_letter(const std::string& letter) const {
  return std::any_of(choices.begin(), choices.end(), [&](const Choice& c) { return c.letter == letter; });
}

std::vector<std::size_t> subsample_indices(std::size_t n, std::size_t m) {
  std::vector<std::size_t> out;
  if (n == 0 || m == 0) return out;
  if (n <= m) {
    for (std::size_t i = 0; i < n; ++i) out.push_back(i);
    return out;
  }
  if (m == 1) return {n - 1};
  for (std::size_t i = 0; i < m; ++i) {
    out.push_back(static_cast<std::size_t>(
        std::llround(static_cast<double>(i) * static_cast<double>(n - 1) / static_cast<double>(m - 1))));
  }
  return out;
}

std::string instruction_for(const world::Task& task) {
  if (const auto* obj = std::get_if<world::ObjectNavGoal>(&task)) return "Find the " + obj->category + ".";
  return "Go to the location shown in the goal image.";
}

PromptSample build_prompt_sample(std::span<const mapping::ViewRecord> history,
                                 std::span<const mapping::Frontier> frontiers, const world::Task& task,
                                 const mapping::OccupancyGrid& belief, const world::SensorConfig& sensor,
                                 const PromptConfig& cfg) {
  cfg.validate();
  if (history.empty()) throw Error(ErrorCode::NoHistory, "prompt needs at least one frame");
  if (frontiers.empty()) throw Error(ErrorCode::InvalidArgument, "prompt needs at least one frontier");
  if (frontiers.size() > cfg.letters.size()) {
    throw Error(ErrorCode::TooManyChoices, std::to_string(frontiers.size()) + " frontiers exceed the " +
                                               std::to_string(cfg.letters.size()) + "-letter alphabet");
  }

  PromptSample s;
  s.kind = world::kind_of(task);
  s.instruction = instruction_for(task);
  for (const std::size_t i : subsample_indices(history.size(), static_cast<std::size_t>(cfg.max_history_frames))) {
    s.history.push_back(history[i]);
  }
  if (const auto* img = std::get_if<world::ImageNavGoal>(&task)) {
    s.imagenav_goal = mapping::ViewRecord{kGoalFrameIndex, img->goal_pose};
  }

  std::vector<const mapping::Frontier*> ordered;
  for (const auto& f : frontiers) ordered.push_back(&f);
  std::sort(ordered.begin(), ordered.end(), [](const auto* a, const auto* b) { return a->id < b->id; });
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    const auto view = mapping::select_representative_view(*ordered[i], history, belief, sensor);
    const auto it = std::find_if(history.begin(), history.end(),
                                 [&](const mapping::ViewRecord& v) { return v.frame_index == view.frame_index; });
    s.choices.push_back({std::string(1, cfg.letters[i]), ordered[i]->id, *it, ordered[i]->waypoint});
  }
  return s;
}

}  // namespace fnav::policy
