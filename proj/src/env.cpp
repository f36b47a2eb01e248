#include "retarget/env.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "retarget/errors.hpp"

namespace retarget::env {

using nlohmann::json;

std::string_view to_string(SemanticLabel l) {
  switch (l) {
    case SemanticLabel::kFloor: return "floor";
    case SemanticLabel::kMainObject: return "main_object";
    case SemanticLabel::kObstacle: return "obstacle";
  }
  return "floor";
}

SemanticLabel label_from_string(std::string_view s) {
  if (s == "floor") return SemanticLabel::kFloor;
  if (s == "main_object") return SemanticLabel::kMainObject;
  if (s == "obstacle") return SemanticLabel::kObstacle;
  throw ValidationError("unknown semantic label '" + std::string(s) + "'");
}

Environment::Environment(std::string name, geom::Region footprint,
                         std::vector<SceneObject> objects,
                         std::string main_object_id)
    : name_(std::move(name)),
      footprint_(std::move(footprint)),
      objects_(std::move(objects)),
      main_object_id_(std::move(main_object_id)) {
  if (footprint_.empty()) throw ValidationError("footprint is empty");
  footprint_area_ = geom::region_area(footprint_);
  if (!(footprint_area_ > 0.0))
    throw ValidationError("footprint area must be positive");

  std::set<std::string> ids;
  bool main_found = false;
  for (std::size_t i = 0; i < objects_.size(); ++i) {
    const SceneObject& o = objects_[i];
    if (o.id.empty()) throw ValidationError("object with empty id");
    if (!ids.insert(o.id).second)
      throw ValidationError("duplicate object id '" + o.id + "'");
    if (o.label == SemanticLabel::kFloor)
      throw ValidationError("object '" + o.id + "' may not carry label floor");
    if (!o.rect.valid())
      throw ValidationError("object '" + o.id +
                            "' has zero or negative extent");
    // Exact containment: the part of the rect inside the footprint must be
    // the whole rect.
    double inside = geom::region_area(
        geom::region_intersection(geom::Region::from_rect(o.rect), footprint_));
    if (inside < o.rect.area() - 1e-9 * std::max(1.0, o.rect.area()))
      throw ValidationError("object '" + o.id + "' outside footprint");
    if (o.label == SemanticLabel::kMainObject) {
      if (main_found) throw ValidationError("duplicate main object");
      main_found = true;
      main_index_ = i;
    }
  }
  if (!main_found) throw ValidationError("missing main object");
  if (objects_[main_index_].id != main_object_id_)
    throw ValidationError("main_object_id '" + main_object_id_ +
                          "' does not name the main_object-labeled object");

  std::vector<geom::Rect> object_rects;
  for (const SceneObject& o : objects_) object_rects.push_back(o.rect);
  free_space_ =
      geom::region_difference(footprint_, geom::Region(object_rects));
  if (!(geom::region_area(free_space_) > 0.0))
    throw ValidationError("free space has zero area");
  walls_ = geom::boundary_segments(footprint_);
}

geom::Region Environment::label_region(SemanticLabel l) const {
  switch (l) {
    case SemanticLabel::kFloor: return free_space_;
    case SemanticLabel::kMainObject:
      return geom::Region::from_rect(main_object().rect);
    case SemanticLabel::kObstacle: {
      std::vector<geom::Rect> rects;
      for (const SceneObject& o : objects_)
        if (o.label == SemanticLabel::kObstacle) rects.push_back(o.rect);
      return geom::Region(std::move(rects));
    }
  }
  return {};
}

std::vector<geom::Segment> vertical_plane_segments(
    const Environment& e, std::span<const std::string> object_ids) {
  std::vector<geom::Segment> out = e.wall_segments();
  for (const std::string& id : object_ids) {
    bool found = false;
    for (const SceneObject& o : e.objects()) {
      if (o.id != id) continue;
      auto segs =
          geom::boundary_segments(geom::Region::from_rect(o.rect));
      out.insert(out.end(), segs.begin(), segs.end());
      found = true;
      break;
    }
    if (!found)
      throw ValidationError("no object with id '" + id + "'");
  }
  return out;
}

namespace {

geom::Rect rect_from_json(const json& j, const std::string& where) {
  for (const char* k : {"x_min", "y_min", "x_max", "y_max"})
    if (!j.contains(k) || !j[k].is_number())
      throw ValidationError(where + ": rect needs numeric " + k);
  geom::Rect r{j["x_min"].get<double>(), j["y_min"].get<double>(),
               j["x_max"].get<double>(), j["y_max"].get<double>()};
  if (!r.valid())
    throw ValidationError(where + ": zero or negative extent");
  return r;
}

json rect_to_json(const geom::Rect& r) {
  return json{{"x_min", r.x_min},
              {"y_min", r.y_min},
              {"x_max", r.x_max},
              {"y_max", r.y_max}};
}

}  // namespace

Environment load_environment(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("document must be a JSON object");
  if (!doc.contains("name") || !doc["name"].is_string())
    throw ValidationError("missing string field 'name'");
  if (!doc.contains("footprint") || !doc["footprint"].is_array())
    throw ValidationError("missing array field 'footprint'");
  if (!doc.contains("objects") || !doc["objects"].is_array())
    throw ValidationError("missing array field 'objects'");
  if (!doc.contains("main_object_id") || !doc["main_object_id"].is_string())
    throw ValidationError("missing string field 'main_object_id'");

  std::vector<geom::Rect> footprint;
  for (const json& j : doc["footprint"])
    footprint.push_back(rect_from_json(j, "footprint"));

  std::vector<SceneObject> objects;
  for (const json& j : doc["objects"]) {
    if (!j.contains("id") || !j["id"].is_string())
      throw ValidationError("object missing string field 'id'");
    if (!j.contains("label") || !j["label"].is_string())
      throw ValidationError("object missing string field 'label'");
    if (!j.contains("rect"))
      throw ValidationError("object missing field 'rect'");
    SceneObject o;
    o.id = j["id"].get<std::string>();
    o.label = label_from_string(j["label"].get<std::string>());
    o.rect = rect_from_json(j["rect"], "object '" + o.id + "'");
    objects.push_back(std::move(o));
  }

  return Environment(doc["name"].get<std::string>(),
                     geom::Region(std::move(footprint)), std::move(objects),
                     doc["main_object_id"].get<std::string>());
}

Environment load_environment_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw ValidationError("cannot read environment file '" + path.string() +
                          "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_environment(buf.str());
}

std::string serialize_environment(const Environment& e) {
  json doc;
  doc["name"] = e.name();
  doc["footprint"] = json::array();
  for (const geom::Rect& r : e.footprint().rects())
    doc["footprint"].push_back(rect_to_json(r));
  doc["objects"] = json::array();
  for (const SceneObject& o : e.objects()) {
    doc["objects"].push_back(json{{"id", o.id},
                                  {"label", std::string(to_string(o.label))},
                                  {"rect", rect_to_json(o.rect)}});
  }
  doc["main_object_id"] = e.main_object_id();
  return doc.dump(2);
}

}  // namespace retarget::env
