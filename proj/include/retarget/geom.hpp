#pragma once

#include <optional>
#include <span>
#include <vector>

namespace retarget::geom {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Axis-aligned rectangle in meters with strictly positive extent.
struct Rect {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }
  Point center() const { return {0.5 * (x_min + x_max), 0.5 * (y_min + y_max)}; }
  bool valid() const { return x_min < x_max && y_min < y_max; }

  /// Closed-set membership.
  bool contains(Point p) const {
    return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
  }

  static std::optional<Rect> intersection(const Rect& a, const Rect& b);
  static double overlap_area(const Rect& a, const Rect& b);
};

/// Union of rectangles. Rectangles may overlap; covered ground counts once.
/// The empty list is the valid empty region.
class Region {
 public:
  Region() = default;
  explicit Region(std::vector<Rect> rects);
  static Region from_rect(const Rect& r) { return Region({r}); }

  const std::vector<Rect>& rects() const { return rects_; }
  bool empty() const { return rects_.empty(); }
  bool contains(Point p) const;
  Rect bounding_box() const;  // requires non-empty

 private:
  std::vector<Rect> rects_;
};

enum class Orientation { kHorizontal, kVertical };

/// Maximal axis-aligned boundary run: a horizontal segment lies at y = fixed
/// spanning x in [lo, hi]; a vertical one at x = fixed spanning y in [lo, hi].
struct Segment {
  Orientation orientation = Orientation::kHorizontal;
  double fixed = 0.0;
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  Point start() const;
  Point end() const;
};

double total_length(std::span<const Segment> segments);

/// Exact set-union area via coordinate compression.
double region_area(const Region& r);

Region region_intersection(const Region& a, const Region& b);
Region region_difference(const Region& a, const Region& b);

/// Pairwise-disjoint rectangles covering the same point set.
std::vector<Rect> disjoint_cover(const Region& r);

/// Maximal segments forming the topological boundary of the covered set.
/// Interior edges shared by overlapping/abutting rectangles are excluded.
std::vector<Segment> boundary_segments(const Region& r);

/// Sum over subject segments of the 1-D union of overlaps with target
/// segments of the same orientation whose fixed coordinate lies strictly
/// closer than tol. Sub-intervals are never double-counted.
double matched_edge_length(std::span<const Segment> subject,
                           std::span<const Segment> target, double tol);

/// The matched sub-intervals themselves (merged, clipped to the subject).
std::vector<Segment> matched_subject_intervals(std::span<const Segment> subject,
                                               std::span<const Segment> target,
                                               double tol);

/// Continuous, strictly increasing piecewise-linear map of one axis.
/// Defined by knot positions, one slope per interval (n_knots + 1, all > 0),
/// and an anchor point the map passes through.
class PiecewiseLinearMap {
 public:
  PiecewiseLinearMap();  // identity
  PiecewiseLinearMap(std::vector<double> knots, std::vector<double> slopes,
                     double anchor_x, double anchor_y);

  double operator()(double x) const;
  double inverse(double y) const;
  bool is_identity() const { return identity_; }
  const std::vector<double>& knots() const { return knots_; }
  const std::vector<double>& slopes() const { return slopes_; }

 private:
  std::vector<double> knots_;
  std::vector<double> values_;  // map value at each knot
  std::vector<double> slopes_;
  bool identity_ = true;
};

Point transform_point(Point p, const PiecewiseLinearMap& mx,
                      const PiecewiseLinearMap& my);

/// Separable monotone maps send axis-aligned rectangles to axis-aligned
/// rectangles; the region maps rect by rect.
Region transform_region(const Region& r, const PiecewiseLinearMap& mx,
                        const PiecewiseLinearMap& my);

std::vector<Segment> transform_segments(std::span<const Segment> segments,
                                        const PiecewiseLinearMap& mx,
                                        const PiecewiseLinearMap& my);

}  // namespace retarget::geom
