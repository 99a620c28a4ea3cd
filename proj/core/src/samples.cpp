#include <cmath>
#include <cstdio>

#include "fnav/datagen.hpp"
#include "json_views.hpp"

namespace fnav::datagen {

using detail::ojson;

std::string_view to_string(SampleKind kind) {
  switch (kind) {
    case SampleKind::ObjectNav: return "objectnav";
    case SampleKind::Ovon: return "ovon";
    case SampleKind::ImageNav: return "imagenav";
    case SampleKind::AuxSpatial: return "aux_spatial";
  }
  return "unknown";
}

SampleKind parse_sample_kind(std::string_view text) {
  for (const auto k : kAllSampleKinds)
    if (text == to_string(k)) return k;
  if (text == "aux") return SampleKind::AuxSpatial;
  throw Error(ErrorCode::InvalidArgument, "unknown sample kind '" + std::string(text) + "'");
}

Vec2 relative_coords(const world::Pose& current, Vec2 target) {
  const Vec2 d = target - current.position();
  const Vec2 f = current.forward();
  return {d.dot(f), d.dot(f.perp())};
}

Vec2 world_coords(const world::Pose& current, Vec2 local) {
  const Vec2 f = current.forward();
  return current.position() + f * local.x + f.perp() * local.y;
}

std::string aux_question(Vec2 query_xy) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "Which part of the environment is located at (%.1f,%.1f)?", query_xy.x, query_xy.y);
  return buf;
}

std::vector<TrainingSample> navigation_samples(const Trajectory& trajectory, SampleKind kind) {
  if (kind == SampleKind::AuxSpatial) throw Error(ErrorCode::InvalidArgument, "aux samples are not navigation samples");
  std::vector<TrainingSample> out;
  out.reserve(trajectory.decisions.size());
  char suffix[16];
  for (std::size_t i = 0; i < trajectory.decisions.size(); ++i) {
    const auto& d = trajectory.decisions[i];
    std::snprintf(suffix, sizeof(suffix), "_d%03zu", i);
    out.push_back({trajectory.episode.episode_id + suffix, kind, d.sample, *d.sample.answer});
  }
  return out;
}

std::string sample_to_json(const TrainingSample& s) {
  ojson j;
  j["sample_id"] = s.sample_id;
  j["task_kind"] = to_string(s.kind);
  if (const auto* p = std::get_if<policy::PromptSample>(&s.body)) {
    j["instruction"] = p->instruction;
    j["history"] = detail::views_json(p->history);
    j["imagenav_goal"] = p->imagenav_goal ? detail::view_json(*p->imagenav_goal) : ojson(nullptr);
    ojson choices = ojson::array();
    for (const auto& c : p->choices) {
      choices.push_back({{"letter", c.letter},
                         {"frontier_id", c.frontier_id},
                         {"view", detail::view_json(c.view)},
                         {"waypoint", {c.waypoint.x, c.waypoint.y}}});
    }
    j["choices"] = std::move(choices);
  } else {
    const auto& a = std::get<AuxSample>(s.body);
    j["history"] = detail::views_json(a.history);
    j["question"] = a.question;
    j["query_xy"] = {a.query_xy.x, a.query_xy.y};
    ojson cands = ojson::array();
    for (const auto& c : a.candidates) cands.push_back({{"letter", c.letter}, {"view", detail::view_json(c.view)}});
    j["candidates"] = std::move(cands);
  }
  j["answer"] = s.answer;
  return j.dump();
}

TrainingSample sample_from_json(const std::string& line) {
  try {
    const ojson j = ojson::parse(line);
    TrainingSample s;
    s.sample_id = j.at("sample_id").get<std::string>();
    s.kind = parse_sample_kind(j.at("task_kind").get<std::string>());
    s.answer = j.at("answer").get<std::string>();
    std::vector<mapping::ViewRecord> history;
    for (const auto& v : j.at("history")) history.push_back(detail::view_from(v));
    if (s.kind == SampleKind::AuxSpatial) {
      AuxSample a;
      a.history = std::move(history);
      a.question = j.at("question").get<std::string>();
      a.query_xy = {j.at("query_xy").at(0).get<double>(), j.at("query_xy").at(1).get<double>()};
      for (const auto& c : j.at("candidates")) {
        a.candidates.push_back({c.at("letter").get<std::string>(), detail::view_from(c.at("view"))});
      }
      s.body = std::move(a);
    } else {
      policy::PromptSample p;
      p.kind = s.kind == SampleKind::ImageNav ? world::TaskKind::ImageNav : world::TaskKind::ObjectNav;
      p.instruction = j.at("instruction").get<std::string>();
      p.history = std::move(history);
      if (!j.at("imagenav_goal").is_null()) p.imagenav_goal = detail::view_from(j.at("imagenav_goal"));
      for (const auto& c : j.at("choices")) {
        const auto& wp = c.at("waypoint");
        p.choices.push_back({c.at("letter").get<std::string>(), c.at("frontier_id").get<int>(),
                             detail::view_from(c.at("view")), Vec2{wp.at(0).get<double>(), wp.at(1).get<double>()}});
      }
      p.answer = s.answer;
      s.body = std::move(p);
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("bad sample line: ") + e.what());
  }
}

}  // namespace fnav::datagen
