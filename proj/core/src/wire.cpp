#include "fnav/policy.hpp"
#include "json_views.hpp"

namespace fnav::policy {

using detail::ojson;
using detail::view_from;
using detail::view_json;

std::string to_wire_json(const PromptSample& sample, const std::optional<std::string>& debug_letter) {
  ojson j;
  j["version"] = 1;
  j["task"] = {{"kind", sample.kind == world::TaskKind::ObjectNav ? "objectnav" : "imagenav"},
               {"instruction", sample.instruction}};
  j["history"] = detail::views_json(sample.history);
  j["imagenav_goal"] = sample.imagenav_goal ? view_json(*sample.imagenav_goal) : ojson(nullptr);
  ojson choices = ojson::array();
  for (const auto& c : sample.choices) {
    choices.push_back({{"letter", c.letter},
                       {"frontier_id", c.frontier_id},
                       {"view", view_json(c.view)},
                       {"waypoint", {c.waypoint.x, c.waypoint.y}}});
  }
  j["choices"] = std::move(choices);
  if (debug_letter) j["debug"] = {{"oracle_letter", *debug_letter}};
  return j.dump();
}

PromptSample from_wire_json(const std::string& body) {
  try {
    const ojson j = ojson::parse(body);
    if (j.at("version").get<int>() != 1) throw Error(ErrorCode::ParseError, "unsupported wire version");
    PromptSample s;
    const std::string kind = j.at("task").at("kind").get<std::string>();
    if (kind == "objectnav") {
      s.kind = world::TaskKind::ObjectNav;
    } else if (kind == "imagenav") {
      s.kind = world::TaskKind::ImageNav;
    } else {
      throw Error(ErrorCode::ParseError, "unknown task kind '" + kind + "'");
    }
    s.instruction = j.at("task").at("instruction").get<std::string>();
    for (const auto& v : j.at("history")) s.history.push_back(view_from(v));
    if (!j.at("imagenav_goal").is_null()) s.imagenav_goal = view_from(j.at("imagenav_goal"));
    for (const auto& c : j.at("choices")) {
      const auto& wp = c.at("waypoint");
      s.choices.push_back({c.at("letter").get<std::string>(), c.at("frontier_id").get<int>(), view_from(c.at("view")),
                           Vec2{wp.at(0).get<double>(), wp.at(1).get<double>()}});
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("bad wire request: ") + e.what());
  }
}

std::string parse_reply(const std::string& body, const PromptSample& sample) {
  std::string letter;
  try {
    letter = ojson::parse(body).at("letter").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::EndpointError, std::string("malformed policy reply: ") + e.what());
  }
  if (!sample.has_letter(letter)) throw Error(ErrorCode::InvalidChoice, "reply letter '" + letter + "' not offered");
  return letter;
}

}  // namespace fnav::policy
