#pragma once

// Shared JSON shapes for pose references; private to the library.

#include "fnav/mapping.hpp"
#include "json.hpp"

namespace fnav::detail {

using ojson = nlohmann::ordered_json;

inline ojson view_json(const mapping::ViewRecord& v) {
  return ojson{{"frame", v.frame_index}, {"x", v.pose.x}, {"y", v.pose.y}, {"heading", v.pose.heading}};
}

inline mapping::ViewRecord view_from(const ojson& j) {
  return {j.at("frame").get<int>(),
          world::Pose(j.at("x").get<double>(), j.at("y").get<double>(), j.at("heading").get<double>())};
}

inline ojson views_json(const std::vector<mapping::ViewRecord>& views) {
  ojson out = ojson::array();
  for (const auto& v : views) out.push_back(view_json(v));
  return out;
}

}  // namespace fnav::detail
