#include "retarget/metrics.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "retarget/errors.hpp"

namespace retarget::metrics {

using nlohmann::json;

double Weights::total() const {
  double sum = w_size + w_sem;
  for (double w : w_hor) sum += w;
  for (double w : w_ver) sum += w;
  return sum;
}

void Weights::validate() const {
  if (w_hor.empty() || w_ver.empty())
    throw ValidationError("weights need at least one entry per target list");
  if (w_hor.size() > 1 || w_ver.size() > 1)
    throw ValidationError(
        "only one horizontal and one vertical target are wired in");
  bool any_positive = w_size > 0.0 || w_sem > 0.0;
  for (double w : w_hor) {
    if (w < 0.0) throw ValidationError("weights must be non-negative");
    any_positive = any_positive || w > 0.0;
  }
  for (double w : w_ver) {
    if (w < 0.0) throw ValidationError("weights must be non-negative");
    any_positive = any_positive || w > 0.0;
  }
  if (w_size < 0.0 || w_sem < 0.0)
    throw ValidationError("weights must be non-negative");
  if (!any_positive) throw ValidationError("at least one weight must be positive");
}

std::string report_to_json(const MetricReport& r) {
  json j{{"psi_hor", r.psi_hor},
         {"psi_ver", r.psi_ver},
         {"psi_sem", r.psi_sem},
         {"psi_size", r.psi_size},
         {"registered_area", r.registered_area},
         {"registered_main_surface_ratio", r.registered_main_surface_ratio},
         {"objective", r.objective}};
  return j.dump(2);
}

MetricReport report_from_json(const std::string& text) {
  json j = json::parse(text);
  MetricReport r;
  r.psi_hor = j.at("psi_hor").get<double>();
  r.psi_ver = j.at("psi_ver").get<double>();
  r.psi_sem = j.at("psi_sem").get<double>();
  r.psi_size = j.at("psi_size").get<double>();
  r.registered_area = j.at("registered_area").get<double>();
  r.registered_main_surface_ratio =
      j.at("registered_main_surface_ratio").get<double>();
  r.objective = j.at("objective").get<double>();
  return r;
}

namespace {

std::vector<geom::Segment> rect_edges(const geom::Rect& r) {
  return {geom::Segment{geom::Orientation::kHorizontal, r.y_min, r.x_min, r.x_max},
          geom::Segment{geom::Orientation::kHorizontal, r.y_max, r.x_min, r.x_max},
          geom::Segment{geom::Orientation::kVertical, r.x_min, r.y_min, r.y_max},
          geom::Segment{geom::Orientation::kVertical, r.x_max, r.y_min, r.y_max}};
}

geom::Rect translate(const geom::Rect& r, const Placement& phi) {
  return {r.x_min + phi.x, r.y_min + phi.y, r.x_max + phi.x, r.y_max + phi.y};
}

geom::Segment translate(const geom::Segment& s, const Placement& phi) {
  if (s.orientation == geom::Orientation::kHorizontal)
    return {s.orientation, s.fixed + phi.y, s.lo + phi.x, s.hi + phi.x};
  return {s.orientation, s.fixed + phi.x, s.lo + phi.y, s.hi + phi.y};
}

geom::Rect map_rect(const geom::Rect& r, const rescale::RescaleMap& m) {
  return {m.mx()(r.x_min), m.my()(r.y_min), m.mx()(r.x_max), m.my()(r.y_max)};
}

geom::Segment map_segment(const geom::Segment& s, const rescale::RescaleMap& m) {
  if (s.orientation == geom::Orientation::kHorizontal)
    return {s.orientation, m.my()(s.fixed), m.mx()(s.lo), m.mx()(s.hi)};
  return {s.orientation, m.mx()(s.fixed), m.my()(s.lo), m.my()(s.hi)};
}

// Overlap area of two pairwise-disjoint rect covers: the pairwise sum is
// exact because neither family double-covers ground.
double disjoint_overlap_area(std::span<const geom::Rect> a,
                             std::span<const geom::Rect> b,
                             const Placement& phi_a,
                             const rescale::RescaleMap& map_b) {
  double area = 0.0;
  for (const geom::Rect& rb : b) {
    geom::Rect tb = map_rect(rb, map_b);
    for (const geom::Rect& ra : a) {
      double w = std::min(ra.x_max + phi_a.x, tb.x_max) -
                 std::max(ra.x_min + phi_a.x, tb.x_min);
      if (w <= 0.0) continue;
      double h = std::min(ra.y_max + phi_a.y, tb.y_max) -
                 std::max(ra.y_min + phi_a.y, tb.y_min);
      if (h > 0.0) area += w * h;
    }
  }
  return area;
}

rescale::RescaleMap map_for(const env::Environment& P,
                            const rescale::GainSet& G) {
  const geom::Rect& m = P.main_object().rect;
  return rescale::RescaleMap(
      rescale::GridPartition{m.x_min, m.x_max, m.y_min, m.y_max}, G);
}

}  // namespace

double psi_hor(const env::Environment& V, const env::Environment& P,
               const rescale::GainSet& G, const Placement& phi, double tol) {
  ObjectiveEvaluator eval(V, P, Weights{}, tol);
  return eval.evaluate(G, phi).report.psi_hor;
}

double psi_ver(const env::Environment& V, const env::Environment& P,
               const rescale::GainSet& G, const Placement& phi, double tol) {
  ObjectiveEvaluator eval(V, P, Weights{}, tol);
  return eval.evaluate(G, phi).report.psi_ver;
}

SizeResult psi_size(const env::Environment& V, const env::Environment& P,
                    const rescale::GainSet& G, const Placement& phi) {
  rescale::RescaleMap map = map_for(P, G);
  geom::Region p_foot = rescale::transform_region(P.footprint(), map);
  std::vector<geom::Rect> v_rects;
  for (const geom::Rect& r : V.footprint().rects())
    v_rects.push_back(translate(r, phi));
  double area = geom::region_area(
      geom::region_intersection(geom::Region(std::move(v_rects)), p_foot));
  return {area / V.footprint_area(), area};
}

double psi_sem(const env::Environment& V, const env::Environment& P,
               const rescale::GainSet& G, const Placement& phi) {
  ObjectiveEvaluator eval(V, P, Weights{}, 0.01);
  return eval.evaluate(G, phi).report.psi_sem;
}

double registered_main_surface_ratio(const env::Environment& V,
                                     const env::Environment& P,
                                     const rescale::GainSet& G,
                                     const Placement& phi) {
  ObjectiveEvaluator eval(V, P, Weights{}, 0.01);
  return eval.evaluate(G, phi).report.registered_main_surface_ratio;
}

ObjectiveResult objective(const env::Environment& V, const env::Environment& P,
                          const rescale::GainSet& G, const Placement& phi,
                          const Weights& weights, double tol) {
  ObjectiveEvaluator eval(V, P, weights, tol);
  return eval.evaluate(G, phi);
}

ObjectiveEvaluator::ObjectiveEvaluator(const env::Environment& V,
                                       const env::Environment& P,
                                       Weights weights, double tol)
    : weights_(std::move(weights)), tol_(tol) {
  weights_.validate();
  if (!(tol_ > 0.0)) throw ValidationError("edge tolerance must be > 0");

  const geom::Rect& pm = P.main_object().rect;
  partition_ = rescale::GridPartition{pm.x_min, pm.x_max, pm.y_min, pm.y_max};

  v_main_rect_ = V.main_object().rect;
  v_main_edges_ = rect_edges(v_main_rect_);
  v_walls_ = V.wall_segments();
  v_foot_cells_ = geom::disjoint_cover(V.footprint());
  v_free_cells_ = geom::disjoint_cover(V.free_space());
  v_obstacle_cells_ =
      geom::disjoint_cover(V.label_region(env::SemanticLabel::kObstacle));
  v_main_perimeter_ = 2.0 * (v_main_rect_.width() + v_main_rect_.height());
  v_wall_length_ = geom::total_length(v_walls_);
  v_foot_area_ = V.footprint_area();
  v_main_area_ = v_main_rect_.area();

  p_main_rect_ = pm;
  p_main_edges_ = rect_edges(pm);
  p_walls_ = P.wall_segments();
  p_foot_cells_ = geom::disjoint_cover(P.footprint());
  p_free_cells_ = geom::disjoint_cover(P.free_space());
  p_obstacle_cells_ =
      geom::disjoint_cover(P.label_region(env::SemanticLabel::kObstacle));
}

ObjectiveResult ObjectiveEvaluator::evaluate(const rescale::GainSet& g,
                                             const Placement& phi) const {
  rescale::RescaleMap map(partition_, g);

  MetricReport r;

  // Horizontal edge match over the main objects.
  {
    geom::Segment mapped[4];
    for (int i = 0; i < 4; ++i) mapped[i] = map_segment(p_main_edges_[i], map);
    double matched = 0.0;
    for (const geom::Segment& s : v_main_edges_) {
      geom::Segment sv = translate(s, phi);
      // A virtual edge can match the near and far physical edge at once only
      // if they are within 2*tol of each other; the interval union below
      // handles that without double-counting.
      std::pair<double, double> spans[4];
      int n = 0;
      for (const geom::Segment& t : mapped) {
        if (t.orientation != sv.orientation) continue;
        if (!(std::abs(t.fixed - sv.fixed) < tol_)) continue;
        double lo = std::max(sv.lo, t.lo);
        double hi = std::min(sv.hi, t.hi);
        if (hi > lo) spans[n++] = {lo, hi};
      }
      std::sort(spans, spans + n);
      double covered_to = -1e300;
      for (int i = 0; i < n; ++i) {
        double lo = std::max(spans[i].first, covered_to);
        if (spans[i].second > lo) {
          matched += spans[i].second - lo;
          covered_to = spans[i].second;
        }
      }
    }
    r.psi_hor = matched / v_main_perimeter_;
  }

  // Vertical plane match over the walls.
  {
    std::vector<geom::Segment> p_mapped;
    p_mapped.reserve(p_walls_.size());
    for (const geom::Segment& s : p_walls_) p_mapped.push_back(map_segment(s, map));
    std::vector<geom::Segment> v_translated;
    v_translated.reserve(v_walls_.size());
    for (const geom::Segment& s : v_walls_) v_translated.push_back(translate(s, phi));
    r.psi_ver =
        geom::matched_edge_length(v_translated, p_mapped, tol_) / v_wall_length_;
  }

  // Registered footprint intersection.
  double registered =
      disjoint_overlap_area(v_foot_cells_, p_foot_cells_, phi, map);
  r.registered_area = registered;
  r.psi_size = registered / v_foot_area_;

  // Semantic match: like-labeled intersection area over the registered area.
  if (registered > 0.0) {
    double matched = disjoint_overlap_area(v_free_cells_, p_free_cells_, phi, map);
    matched += disjoint_overlap_area(v_obstacle_cells_, p_obstacle_cells_, phi, map);
    geom::Rect pm = map_rect(p_main_rect_, map);
    geom::Rect vm = translate(v_main_rect_, phi);
    matched += geom::Rect::overlap_area(vm, pm);
    r.psi_sem = matched / registered;
  } else {
    r.psi_sem = 0.0;  // the 0/0 case; keeps disjoint placements unattractive
  }

  {
    geom::Rect pm = map_rect(p_main_rect_, map);
    geom::Rect vm = translate(v_main_rect_, phi);
    r.registered_main_surface_ratio =
        geom::Rect::overlap_area(vm, pm) / v_main_area_;
  }

  r.objective = weights_.w_hor[0] * r.psi_hor + weights_.w_ver[0] * r.psi_ver +
                weights_.w_size * r.psi_size + weights_.w_sem * r.psi_sem;
  return {r.objective, r};
}

}  // namespace retarget::metrics
