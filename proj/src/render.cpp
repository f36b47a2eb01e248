#include "retarget/render.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <vector>

#include "retarget/metrics.hpp"
#include "retarget/rescale.hpp"

namespace retarget::render {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

struct Frame {
  double scale;
  double x0;      // world x at document left
  double y1;      // world y at document top
  double doc_w, doc_h;

  double X(double wx) const { return (wx - x0) * scale; }
  double Y(double wy) const { return (y1 - wy) * scale; }
};

geom::Rect translate(const geom::Rect& r, const metrics::Placement& phi) {
  return {r.x_min + phi.x, r.y_min + phi.y, r.x_max + phi.x, r.y_max + phi.y};
}

geom::Region translate(const geom::Region& region,
                       const metrics::Placement& phi) {
  std::vector<geom::Rect> rects;
  rects.reserve(region.rects().size());
  for (const geom::Rect& r : region.rects()) rects.push_back(translate(r, phi));
  return geom::Region(std::move(rects));
}

std::vector<geom::Segment> translate(std::span<const geom::Segment> segs,
                                     const metrics::Placement& phi) {
  std::vector<geom::Segment> out;
  out.reserve(segs.size());
  for (const geom::Segment& s : segs) {
    if (s.orientation == geom::Orientation::kHorizontal)
      out.push_back({s.orientation, s.fixed + phi.y, s.lo + phi.x, s.hi + phi.x});
    else
      out.push_back({s.orientation, s.fixed + phi.x, s.lo + phi.y, s.hi + phi.y});
  }
  return out;
}

void emit_rects(std::ostringstream& svg, const Frame& f,
                const std::vector<geom::Rect>& rects, const std::string& fill,
                const std::string& cls, double opacity) {
  for (const geom::Rect& r : rects) {
    svg << "  <rect class=\"" << cls << "\" x=\"" << fmt(f.X(r.x_min))
        << "\" y=\"" << fmt(f.Y(r.y_max)) << "\" width=\""
        << fmt((r.x_max - r.x_min) * f.scale) << "\" height=\""
        << fmt((r.y_max - r.y_min) * f.scale) << "\" fill=\"" << fill
        << "\" fill-opacity=\"" << fmt(opacity) << "\" stroke=\"none\"/>\n";
  }
}

void emit_outline(std::ostringstream& svg, const Frame& f,
                  std::span<const geom::Segment> segs, const std::string& color,
                  double width, const std::string& cls,
                  const std::string& dash = "") {
  for (const geom::Segment& s : segs) {
    geom::Point a = s.start();
    geom::Point b = s.end();
    svg << "  <line class=\"" << cls << "\" x1=\"" << fmt(f.X(a.x))
        << "\" y1=\"" << fmt(f.Y(a.y)) << "\" x2=\"" << fmt(f.X(b.x))
        << "\" y2=\"" << fmt(f.Y(b.y)) << "\" stroke=\"" << color
        << "\" stroke-width=\"" << fmt(width) << "\"";
    if (!dash.empty()) svg << " stroke-dasharray=\"" << dash << "\"";
    svg << "/>\n";
  }
}

}  // namespace

std::string render_registration(const env::Environment& V,
                                const env::Environment& P,
                                const optimize::RegistrationResult& result,
                                const RenderStyle& style) {
  const metrics::Placement phi{result.best_phi.x, result.best_phi.y};
  const geom::Rect& pm = P.main_object().rect;
  rescale::RescaleMap map(
      rescale::GridPartition{pm.x_min, pm.x_max, pm.y_min, pm.y_max},
      result.best_gains);

  // Evaluation-frame geometry.
  geom::Region v_foot = translate(V.footprint(), phi);
  geom::Region p_foot = rescale::transform_region(P.footprint(), map);
  geom::Region registered = geom::region_intersection(v_foot, p_foot);

  geom::Region v_main =
      translate(V.label_region(env::SemanticLabel::kMainObject), phi);
  geom::Region p_main = rescale::transform_region(
      P.label_region(env::SemanticLabel::kMainObject), map);
  geom::Region main_overlap = geom::region_intersection(v_main, p_main);

  geom::Region v_obstacles =
      translate(V.label_region(env::SemanticLabel::kObstacle), phi);
  geom::Region p_obstacles = rescale::transform_region(
      P.label_region(env::SemanticLabel::kObstacle), map);

  // Red: registered ground that is an obstacle on either side or covered by
  // exactly one of the two main objects.
  std::vector<geom::Rect> red_rects;
  for (const geom::Rect& r : v_obstacles.rects()) red_rects.push_back(r);
  for (const geom::Rect& r : p_obstacles.rects()) red_rects.push_back(r);
  for (const geom::Rect& r : v_main.rects()) red_rects.push_back(r);
  for (const geom::Rect& r : p_main.rects()) red_rects.push_back(r);
  geom::Region red_region = geom::region_difference(
      geom::region_intersection(geom::Region(red_rects), registered),
      main_overlap);

  // Matched edges: main-object outline plus walls.
  std::vector<geom::Segment> v_main_edges =
      translate(geom::boundary_segments(V.label_region(
                    env::SemanticLabel::kMainObject)),
                phi);
  std::vector<geom::Segment> p_main_edges = geom::boundary_segments(p_main);
  std::vector<geom::Segment> v_walls = translate(V.wall_segments(), phi);
  std::vector<geom::Segment> p_walls =
      rescale::transform_segments(P.wall_segments(), map);
  double tol = 0.01;
  std::vector<geom::Segment> matched =
      geom::matched_subject_intervals(v_main_edges, p_main_edges, tol);
  std::vector<geom::Segment> matched_walls =
      geom::matched_subject_intervals(v_walls, p_walls, tol);
  matched.insert(matched.end(), matched_walls.begin(), matched_walls.end());

  // Document frame over both footprints.
  geom::Rect vb = v_foot.bounding_box();
  geom::Rect pb = p_foot.bounding_box();
  geom::Rect world{std::min(vb.x_min, pb.x_min) - style.margin,
                   std::min(vb.y_min, pb.y_min) - style.margin,
                   std::max(vb.x_max, pb.x_max) + style.margin,
                   std::max(vb.y_max, pb.y_max) + style.margin};
  Frame f{style.scale, world.x_min, world.y_max,
          (world.x_max - world.x_min) * style.scale,
          (world.y_max - world.y_min) * style.scale + 72.0};

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(f.doc_w)
      << "\" height=\"" << fmt(f.doc_h) << "\" viewBox=\"0 0 " << fmt(f.doc_w)
      << " " << fmt(f.doc_h) << "\">\n";
  // World coordinates are y-up meters; the document is y-down pixels:
  // doc_x = (x - x0) * scale, doc_y = (y1 - y) * scale.
  svg << "  <!-- world y-up meters mapped to document y-down at "
      << fmt(style.scale) << " px/m -->\n";
  svg << "  <rect x=\"0\" y=\"0\" width=\"" << fmt(f.doc_w) << "\" height=\""
      << fmt(f.doc_h) << "\" fill=\"#ffffff\"/>\n";

  emit_rects(svg, f, registered.rects(), style.intersection_color,
             "registered", 0.35);
  emit_rects(svg, f, red_region.rects(), style.mismatch_color, "mismatch",
             0.55);
  emit_rects(svg, f, main_overlap.rects(), style.main_surface_color,
             "main-surface", 0.85);

  emit_outline(svg, f, geom::boundary_segments(p_foot), style.outline_color,
               style.outline_width, "physical-footprint");
  emit_outline(svg, f, geom::boundary_segments(v_foot), style.outline_color,
               style.outline_width, "virtual-footprint", "6,4");
  emit_outline(svg, f, p_main_edges, style.outline_color,
               0.5 * style.outline_width, "physical-main");
  emit_outline(svg, f, v_main_edges, style.outline_color,
               0.5 * style.outline_width, "virtual-main", "3,3");
  emit_outline(svg, f, matched, style.matched_color, style.matched_width,
               "matched");

  // Legend.
  double ly = f.doc_h - 56.0;
  auto legend_swatch = [&](double lx, const std::string& color,
                           const std::string& label) {
    svg << "  <rect x=\"" << fmt(lx) << "\" y=\"" << fmt(ly)
        << "\" width=\"14\" height=\"14\" fill=\"" << color << "\"/>\n";
    svg << "  <text x=\"" << fmt(lx + 18.0) << "\" y=\"" << fmt(ly + 12.0)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << label
        << "</text>\n";
  };
  legend_swatch(8.0, style.intersection_color, "registered space");
  legend_swatch(150.0, style.matched_color, "matched edges");
  legend_swatch(280.0, style.main_surface_color, "main surface");
  legend_swatch(410.0, style.mismatch_color, "mismatch/obstacle");

  svg << "</svg>\n";
  return svg.str();
}

}  // namespace retarget::render
