#include "retarget/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <json.hpp>

#include "retarget/errors.hpp"

namespace retarget::complexity {

using nlohmann::json;

namespace {

double point_to_rect_distance(geom::Point p, const geom::Rect& r) {
  double dx = std::max({r.x_min - p.x, 0.0, p.x - r.x_max});
  double dy = std::max({r.y_min - p.y, 0.0, p.y - r.y_max});
  return std::hypot(dx, dy);
}

double point_to_segment_distance(geom::Point p, const geom::Segment& s) {
  if (s.orientation == geom::Orientation::kHorizontal) {
    double dx = std::max({s.lo - p.x, 0.0, p.x - s.hi});
    return std::hypot(dx, p.y - s.fixed);
  }
  double dy = std::max({s.lo - p.y, 0.0, p.y - s.hi});
  return std::hypot(p.x - s.fixed, dy);
}

bool strictly_inside(const geom::Region& region, geom::Point p) {
  for (const geom::Rect& r : region.rects())
    if (p.x > r.x_min && p.x < r.x_max && p.y > r.y_min && p.y < r.y_max)
      return true;
  return false;
}

}  // namespace

ComplexityKernel clearance_kernel(double grid_step) {
  if (!(grid_step > 0.0))
    throw ValidationError("sampling grid step must be > 0");
  return [grid_step](const env::Environment& e) -> double {
    geom::Rect bbox = e.footprint().bounding_box();
    std::vector<geom::Rect> object_rects;  // main object blocks walking too
    for (const env::SceneObject& o : e.objects())
      object_rects.push_back(o.rect);
    const std::vector<geom::Segment>& walls = e.wall_segments();

    double sum = 0.0;
    long count = 0;
    // Cell-center sampling keeps points off rect boundaries for typical
    // coordinates.
    for (double y = bbox.y_min + 0.5 * grid_step; y < bbox.y_max;
         y += grid_step) {
      for (double x = bbox.x_min + 0.5 * grid_step; x < bbox.x_max;
           x += grid_step) {
        geom::Point p{x, y};
        if (!strictly_inside(e.footprint(), p)) continue;
        bool in_object = false;
        for (const geom::Rect& r : object_rects)
          if (r.contains(p)) {
            in_object = true;
            break;
          }
        if (in_object) continue;
        double d = std::numeric_limits<double>::infinity();
        for (const geom::Rect& r : object_rects)
          d = std::min(d, point_to_rect_distance(p, r));
        for (const geom::Segment& s : walls)
          d = std::min(d, point_to_segment_distance(p, s));
        sum += d;
        ++count;
      }
    }
    if (count == 0)
      throw ValidationError(
          "no free-space sample points; grid step too coarse or free space "
          "empty");
    return sum / static_cast<double>(count);
  };
}

ComplexityKernel constant_kernel(double c) {
  if (!(c > 0.0)) throw ValidationError("complexity value must be > 0");
  return [c](const env::Environment&) { return c; };
}

double object_scatteredness(const env::Environment& e) {
  const auto& objects = e.objects();
  std::size_t n = objects.size();
  if (n <= 1) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      geom::Point a = objects[i].center();
      geom::Point b = objects[j].center();
      sum += std::hypot(a.x - b.x, a.y - b.y);
    }
  }
  double normalized = sum / (2.0 * static_cast<double>(n));
  return normalized * normalized;
}

ComplexityReport spatial_complexity(const env::Environment& e,
                                    const ComplexityKernel& kernel) {
  ComplexityReport r;
  r.area = e.footprint_area();
  r.c = kernel(e);
  if (!(r.c > 0.0)) throw ValidationError("complexity kernel must yield > 0");
  r.os = object_scatteredness(e);
  r.sc = std::sqrt(r.area) * r.c + r.os;
  return r;
}

double spatial_dissimilarity(const ComplexityReport& a,
                             const ComplexityReport& b) {
  if (!(a.sc > 0.0) || !(b.sc > 0.0))
    throw ValidationError("spatial complexity must be > 0");
  return std::abs(std::log(a.sc / b.sc));
}

SmdResult spatial_matching_difficulty(double sd, double virt_main_area,
                                      double phys_main_area) {
  if (!(virt_main_area > 0.0) || !(phys_main_area > 0.0))
    throw ValidationError("main-object areas must be > 0");
  if (sd < 0.0) throw ValidationError("dissimilarity must be >= 0");
  constexpr double kEps = 1e-9;
  SmdResult r;
  if (sd < kEps) {
    sd = kEps;
    r.degenerate = true;
  }
  r.value = std::abs(std::log(sd * virt_main_area / phys_main_area));
  return r;
}

double complexity_ratio(double c_virt, double c_phys) {
  if (!(c_virt > 0.0)) throw ValidationError("virtual C(E) must be > 0");
  return c_phys / c_virt;
}

PairReport compare_environments(const env::Environment& V,
                                const env::Environment& P,
                                const ComplexityKernel& kernel_virt,
                                const ComplexityKernel& kernel_phys) {
  PairReport r;
  r.virt = spatial_complexity(V, kernel_virt);
  r.phys = spatial_complexity(P, kernel_phys);
  r.sd = spatial_dissimilarity(r.virt, r.phys);
  SmdResult smd = spatial_matching_difficulty(
      r.sd, V.main_object().rect.area(), P.main_object().rect.area());
  r.smd = smd.value;
  r.smd_degenerate = smd.degenerate;
  r.cr = complexity_ratio(r.virt.c, r.phys.c);
  return r;
}

namespace {

json report_json(const ComplexityReport& r) {
  return json{{"area", r.area}, {"c", r.c}, {"os", r.os}, {"sc", r.sc}};
}

}  // namespace

std::string complexity_report_to_json(const std::string& name,
                                      const ComplexityReport& r) {
  json j = report_json(r);
  j["name"] = name;
  return j.dump(2);
}

std::string pair_report_to_json(const PairReport& r) {
  json j{{"sd", r.sd},
         {"smd", r.smd},
         {"smd_degenerate", r.smd_degenerate},
         {"cr", r.cr},
         {"virtual", report_json(r.virt)},
         {"physical", report_json(r.phys)}};
  return j.dump(2);
}

}  // namespace retarget::complexity
