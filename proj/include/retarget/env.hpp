#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "retarget/geom.hpp"

namespace retarget::env {

enum class SemanticLabel { kFloor, kMainObject, kObstacle };

std::string_view to_string(SemanticLabel l);
SemanticLabel label_from_string(std::string_view s);

struct SceneObject {
  std::string id;
  SemanticLabel label = SemanticLabel::kObstacle;
  geom::Rect rect;

  geom::Point center() const { return rect.center(); }
};

/// A labeled top-view floorplan: walkable footprint, one main interaction
/// object, and any number of obstacles. Immutable after construction; all
/// queries are pure.
class Environment {
 public:
  Environment(std::string name, geom::Region footprint,
              std::vector<SceneObject> objects, std::string main_object_id);

  const std::string& name() const { return name_; }
  const geom::Region& footprint() const { return footprint_; }
  const std::vector<SceneObject>& objects() const { return objects_; }
  const std::string& main_object_id() const { return main_object_id_; }
  const SceneObject& main_object() const { return objects_[main_index_]; }

  double footprint_area() const { return footprint_area_; }

  /// Footprint minus the union of object rects.
  const geom::Region& free_space() const { return free_space_; }

  /// floor -> free space, main_object -> its rect, obstacle -> union of
  /// obstacle rects.
  geom::Region label_region(SemanticLabel l) const;

  /// Boundary segments of the footprint (the default vertical-plane set).
  const std::vector<geom::Segment>& wall_segments() const { return walls_; }

 private:
  std::string name_;
  geom::Region footprint_;
  std::vector<SceneObject> objects_;
  std::string main_object_id_;
  std::size_t main_index_ = 0;
  double footprint_area_ = 0.0;
  geom::Region free_space_;
  std::vector<geom::Segment> walls_;
};

/// Vertical-plane set extended with the boundaries of designated objects
/// (walls stay included).
std::vector<geom::Segment> vertical_plane_segments(
    const Environment& e, std::span<const std::string> object_ids);

Environment load_environment(std::string_view json_text);
Environment load_environment_file(const std::filesystem::path& path);
std::string serialize_environment(const Environment& e);

}  // namespace retarget::env
