// Copyright 2026 The subcurve Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <fstream>

#include "json.hpp"
#include "subcurve/metrics.hpp"
#include "subcurve/volume.hpp"

namespace subcurve {

using Json = nlohmann::ordered_json;

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw IoError(path + ": " + e.what());
  }
}

inline void write_json_file(const Json& j, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write " + path);
  os << j.dump(2) << '\n';
  if (!os) throw IoError("failed writing " + path);
}

/** NaN and infinities are written as null. */
inline Json json_number(double v) {
  return std::isfinite(v) ? Json(v) : Json(nullptr);
}

// Feature sidecar: {"points": {id: vertex}, "curves": {id: [[a, b], ...]},
// "surfaces": {id: [...]}} with triangle indices (surface meshes) or vertex
// triples (volume meshes).

namespace detail {

inline FeatureId json_id(const std::string& key) {
  char* end = nullptr;
  const unsigned long v = std::strtoul(key.c_str(), &end, 10);
  if (key.empty() || *end) throw IoError("feature id '" + key + "' is not a number");
  return static_cast<FeatureId>(v);
}

/** Object member `key`, or an empty object. */
inline const Json& json_section(const Json& j, const char* key) {
  static const Json empty = Json::object();
  const auto it = j.find(key);
  return it == j.end() ? empty : *it;
}

template <typename F>
void json_get(const char* what, F&& body) {
  try {
    body();
  } catch (const Json::exception& e) {
    throw IoError(std::string("malformed ") + what + ": " + e.what());
  }
}

}  // namespace detail

inline Json to_json(const FeatureModel& m) {
  Json j{{"points", Json::object()}, {"curves", Json::object()},
         {"surfaces", Json::object()}};
  for (const auto& [id, v] : m.points) j["points"][std::to_string(id)] = v;
  for (const auto& [id, edges] : m.curves) {
    Json a = Json::array();
    for (const Edge& e : edges) a.push_back({e.a, e.b});
    j["curves"][std::to_string(id)] = a;
  }
  for (const auto& [id, tris] : m.surfaces) j["surfaces"][std::to_string(id)] = tris;
  return j;
}

inline FeatureModel feature_model_from_json(const Json& j) {
  FeatureModel m;
  detail::json_get("feature model", [&] {
    for (const auto& [k, v] : detail::json_section(j, "points").items())
      m.points[detail::json_id(k)] = v.get<int>();
    for (const auto& [k, v] : detail::json_section(j, "curves").items()) {
      auto& dst = m.curves[detail::json_id(k)];
      for (const Json& e : v) dst.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    }
    for (const auto& [k, v] : detail::json_section(j, "surfaces").items())
      m.surfaces[detail::json_id(k)] = v.get<std::vector<int>>();
  });
  return m;
}

inline Json to_json(const VolumeFeatures& f) {
  Json j{{"points", Json::object()}, {"curves", Json::object()},
         {"surfaces", Json::object()}};
  for (const auto& [id, v] : f.points) j["points"][std::to_string(id)] = v;
  for (const auto& [id, edges] : f.curves) {
    Json a = Json::array();
    for (const Edge& e : edges) a.push_back({e.a, e.b});
    j["curves"][std::to_string(id)] = a;
  }
  for (const auto& [id, tris] : f.surfaces) {
    Json a = Json::array();
    for (const Tri& t : tris) a.push_back({t[0], t[1], t[2]});
    j["surfaces"][std::to_string(id)] = a;
  }
  return j;
}

inline VolumeFeatures volume_features_from_json(const Json& j) {
  VolumeFeatures f;
  detail::json_get("volume features", [&] {
    for (const auto& [k, v] : detail::json_section(j, "points").items())
      f.points[detail::json_id(k)] = v.get<int>();
    for (const auto& [k, v] : detail::json_section(j, "curves").items()) {
      auto& dst = f.curves[detail::json_id(k)];
      for (const Json& e : v) dst.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    }
    for (const auto& [k, v] : detail::json_section(j, "surfaces").items()) {
      auto& dst = f.surfaces[detail::json_id(k)];
      for (const Json& t : v)
        dst.push_back({t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<int>()});
    }
  });
  return f;
}

// Reports.

inline Json to_json(const QualityReport& r) {
  Json q = Json::array();
  for (double v : r.quality) q.push_back(json_number(v));
  return {{"stage", r.stage},       {"min_quality", json_number(r.min_quality)},
          {"inverted", r.inverted}, {"invalid", r.invalid},
          {"quality", q}};
}

inline Json to_json(const DistanceReport& r) {
  Json per_surface = Json::object();
  for (const auto& [id, d] : r.per_surface)
    per_surface[std::to_string(id)] = json_number(d);
  Json per_element = Json::array();
  for (double d : r.per_element) per_element.push_back(json_number(d));
  return {{"model_distance", json_number(r.model_distance)},
          {"characteristic_length", r.characteristic_length},
          {"grid_degree", r.grid_degree},
          {"grid_points", r.grid_points},
          {"per_surface", per_surface},
          {"per_element", per_element}};
}

inline Json to_json(const NormalAngleReport& r) {
  Json per_edge = Json::array();
  for (double a : r.per_edge) per_edge.push_back(json_number(a));
  return {{"max_angle", json_number(r.max_angle)},
          {"max_edge", r.max_edge},
          {"flagged_samples", r.flagged_samples},
          {"per_edge", per_edge}};
}

inline const char* suggestion_kind_name(SuggestionKind k) {
  return k == SuggestionKind::Curve ? "curve" : "point";
}

/** Suggestions for review; each entry carries "accept": true, which the
 *  reviewer may flip or delete. */
inline Json to_json(const std::vector<SmoothingSuggestion>& list) {
  Json a = Json::array();
  for (const SmoothingSuggestion& s : list)
    a.push_back({{"kind", suggestion_kind_name(s.kind)},
                 {"id", s.id},
                 {"angle", json_number(s.angle)},
                 {"delta", s.delta},
                 {"incident_curves", s.incident_curves},
                 {"accept", true}});
  return {{"suggestions", a}};
}

inline Json to_json(const SmoothingPlan& p) {
  return {{"curves", p.curves}, {"points", p.points}};
}

/**
 * Reads a plan written as {"curves": [...], "points": [...]} or a reviewed
 * suggestion file, where entries with "accept": false are skipped.
 */
inline SmoothingPlan smoothing_plan_from_json(const Json& j) {
  SmoothingPlan p;
  detail::json_get("smoothing plan", [&] {
    if (j.contains("suggestions")) {
      for (const Json& s : j.at("suggestions")) {
        if (!s.value("accept", true)) continue;
        const std::string kind = s.at("kind").get<std::string>();
        const FeatureId id = s.at("id").get<FeatureId>();
        if (kind == "curve") p.curves.push_back(id);
        else if (kind == "point") p.points.push_back(id);
        else throw IoError("unknown suggestion kind '" + kind + "'");
      }
    } else {
      p.curves = j.value("curves", std::vector<FeatureId>{});
      p.points = j.value("points", std::vector<FeatureId>{});
    }
  });
  return p;
}

inline SmoothingPlan read_smoothing_plan(const std::string& path) {
  return smoothing_plan_from_json(read_json_file(path));
}

}  // namespace subcurve
