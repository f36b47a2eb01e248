#include "retarget/geom.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "retarget/errors.hpp"

namespace retarget::geom {

std::optional<Rect> Rect::intersection(const Rect& a, const Rect& b) {
  Rect r{std::max(a.x_min, b.x_min), std::max(a.y_min, b.y_min),
         std::min(a.x_max, b.x_max), std::min(a.y_max, b.y_max)};
  if (!r.valid()) return std::nullopt;
  return r;
}

double Rect::overlap_area(const Rect& a, const Rect& b) {
  double w = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  double h = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  if (w <= 0.0 || h <= 0.0) return 0.0;
  return w * h;
}

Region::Region(std::vector<Rect> rects) : rects_(std::move(rects)) {
  for (const Rect& r : rects_) {
    if (!r.valid())
      throw ValidationError("degenerate rectangle (zero or negative extent)");
  }
}

bool Region::contains(Point p) const {
  for (const Rect& r : rects_)
    if (r.contains(p)) return true;
  return false;
}

Rect Region::bounding_box() const {
  if (rects_.empty()) throw ValidationError("bounding box of empty region");
  Rect b = rects_.front();
  for (const Rect& r : rects_) {
    b.x_min = std::min(b.x_min, r.x_min);
    b.y_min = std::min(b.y_min, r.y_min);
    b.x_max = std::max(b.x_max, r.x_max);
    b.y_max = std::max(b.y_max, r.y_max);
  }
  return b;
}

Point Segment::start() const {
  return orientation == Orientation::kHorizontal ? Point{lo, fixed}
                                                 : Point{fixed, lo};
}

Point Segment::end() const {
  return orientation == Orientation::kHorizontal ? Point{hi, fixed}
                                                 : Point{fixed, hi};
}

double total_length(std::span<const Segment> segments) {
  double sum = 0.0;
  for (const Segment& s : segments) sum += s.length();
  return sum;
}

namespace {

// Sorted unique coordinates of all rect edges, per axis.
struct CompressedGrid {
  std::vector<double> xs;
  std::vector<double> ys;

  std::size_t cols() const { return xs.size() > 1 ? xs.size() - 1 : 0; }
  std::size_t rows() const { return ys.size() > 1 ? ys.size() - 1 : 0; }
};

void add_coords(CompressedGrid& g, const std::vector<Rect>& rects) {
  for (const Rect& r : rects) {
    g.xs.push_back(r.x_min);
    g.xs.push_back(r.x_max);
    g.ys.push_back(r.y_min);
    g.ys.push_back(r.y_max);
  }
}

void finish(CompressedGrid& g) {
  std::sort(g.xs.begin(), g.xs.end());
  g.xs.erase(std::unique(g.xs.begin(), g.xs.end()), g.xs.end());
  std::sort(g.ys.begin(), g.ys.end());
  g.ys.erase(std::unique(g.ys.begin(), g.ys.end()), g.ys.end());
}

bool covers(const std::vector<Rect>& rects, double cx, double cy) {
  for (const Rect& r : rects)
    if (cx > r.x_min && cx < r.x_max && cy > r.y_min && cy < r.y_max)
      return true;
  return false;
}

// Cell coverage mask over the compressed grid, row-major [row * cols + col].
std::vector<char> coverage(const CompressedGrid& g,
                           const std::vector<Rect>& rects) {
  std::vector<char> mask(g.cols() * g.rows(), 0);
  for (std::size_t j = 0; j < g.rows(); ++j) {
    double cy = 0.5 * (g.ys[j] + g.ys[j + 1]);
    for (std::size_t i = 0; i < g.cols(); ++i) {
      double cx = 0.5 * (g.xs[i] + g.xs[i + 1]);
      mask[j * g.cols() + i] = covers(rects, cx, cy) ? 1 : 0;
    }
  }
  return mask;
}

// Merge covered cells into rects: row runs first, then stack rows with an
// identical x-span.
std::vector<Rect> cells_to_rects(const CompressedGrid& g,
                                 const std::vector<char>& mask) {
  std::vector<Rect> rows;
  for (std::size_t j = 0; j < g.rows(); ++j) {
    std::size_t i = 0;
    while (i < g.cols()) {
      if (!mask[j * g.cols() + i]) {
        ++i;
        continue;
      }
      std::size_t i0 = i;
      while (i < g.cols() && mask[j * g.cols() + i]) ++i;
      rows.push_back(Rect{g.xs[i0], g.ys[j], g.xs[i], g.ys[j + 1]});
    }
  }
  // Vertical merge; row rects are already ordered by (y, x).
  std::vector<Rect> merged;
  for (const Rect& r : rows) {
    bool joined = false;
    for (Rect& m : merged) {
      if (m.x_min == r.x_min && m.x_max == r.x_max && m.y_max == r.y_min) {
        m.y_max = r.y_max;
        joined = true;
        break;
      }
    }
    if (!joined) merged.push_back(r);
  }
  return merged;
}

}  // namespace

double region_area(const Region& r) {
  if (r.empty()) return 0.0;
  CompressedGrid g;
  add_coords(g, r.rects());
  finish(g);
  double area = 0.0;
  for (std::size_t j = 0; j < g.rows(); ++j) {
    double cy = 0.5 * (g.ys[j] + g.ys[j + 1]);
    double h = g.ys[j + 1] - g.ys[j];
    for (std::size_t i = 0; i < g.cols(); ++i) {
      double cx = 0.5 * (g.xs[i] + g.xs[i + 1]);
      if (covers(r.rects(), cx, cy)) area += (g.xs[i + 1] - g.xs[i]) * h;
    }
  }
  return area;
}

Region region_intersection(const Region& a, const Region& b) {
  if (a.empty() || b.empty()) return Region{};
  CompressedGrid g;
  add_coords(g, a.rects());
  add_coords(g, b.rects());
  finish(g);
  std::vector<char> mask(g.cols() * g.rows(), 0);
  for (std::size_t j = 0; j < g.rows(); ++j) {
    double cy = 0.5 * (g.ys[j] + g.ys[j + 1]);
    for (std::size_t i = 0; i < g.cols(); ++i) {
      double cx = 0.5 * (g.xs[i] + g.xs[i + 1]);
      mask[j * g.cols() + i] =
          covers(a.rects(), cx, cy) && covers(b.rects(), cx, cy) ? 1 : 0;
    }
  }
  return Region(cells_to_rects(g, mask));
}

Region region_difference(const Region& a, const Region& b) {
  if (a.empty()) return Region{};
  if (b.empty()) return a;
  CompressedGrid g;
  add_coords(g, a.rects());
  add_coords(g, b.rects());
  finish(g);
  std::vector<char> mask(g.cols() * g.rows(), 0);
  for (std::size_t j = 0; j < g.rows(); ++j) {
    double cy = 0.5 * (g.ys[j] + g.ys[j + 1]);
    for (std::size_t i = 0; i < g.cols(); ++i) {
      double cx = 0.5 * (g.xs[i] + g.xs[i + 1]);
      mask[j * g.cols() + i] =
          covers(a.rects(), cx, cy) && !covers(b.rects(), cx, cy) ? 1 : 0;
    }
  }
  return Region(cells_to_rects(g, mask));
}

std::vector<Rect> disjoint_cover(const Region& r) {
  if (r.empty()) return {};
  CompressedGrid g;
  add_coords(g, r.rects());
  finish(g);
  return cells_to_rects(g, coverage(g, r.rects()));
}

std::vector<Segment> boundary_segments(const Region& r) {
  if (r.empty()) return {};
  CompressedGrid g;
  add_coords(g, r.rects());
  finish(g);
  std::vector<char> mask = coverage(g, r.rects());
  auto covered = [&](std::size_t i, std::size_t j) {
    return i < g.cols() && j < g.rows() && mask[j * g.cols() + i] != 0;
  };

  std::vector<Segment> out;
  // Vertical grid lines x = xs[i]; a piece is a boundary run when exactly one
  // side is covered. Adjacent pieces along the same line merge.
  for (std::size_t i = 0; i < g.xs.size(); ++i) {
    std::size_t j = 0;
    while (j < g.rows()) {
      bool left = i > 0 && covered(i - 1, j);
      bool right = covered(i, j);
      if (left == right) {
        ++j;
        continue;
      }
      std::size_t j0 = j;
      while (j < g.rows()) {
        bool l = i > 0 && covered(i - 1, j);
        bool rgt = covered(i, j);
        if (l == rgt) break;
        ++j;
      }
      out.push_back(Segment{Orientation::kVertical, g.xs[i], g.ys[j0], g.ys[j]});
    }
  }
  for (std::size_t j = 0; j < g.ys.size(); ++j) {
    std::size_t i = 0;
    while (i < g.cols()) {
      bool below = j > 0 && covered(i, j - 1);
      bool above = covered(i, j);
      if (below == above) {
        ++i;
        continue;
      }
      std::size_t i0 = i;
      while (i < g.cols()) {
        bool b = j > 0 && covered(i, j - 1);
        bool a = covered(i, j);
        if (b == a) break;
        ++i;
      }
      out.push_back(
          Segment{Orientation::kHorizontal, g.ys[j], g.xs[i0], g.xs[i]});
    }
  }
  return out;
}

namespace {

// Merged 1-D interval union of a subject segment against the targets.
std::vector<std::pair<double, double>> overlap_union(
    const Segment& s, std::span<const Segment> target, double tol) {
  std::vector<std::pair<double, double>> spans;
  for (const Segment& t : target) {
    if (t.orientation != s.orientation) continue;
    if (!(std::abs(t.fixed - s.fixed) < tol)) continue;
    double lo = std::max(s.lo, t.lo);
    double hi = std::min(s.hi, t.hi);
    if (hi > lo) spans.emplace_back(lo, hi);
  }
  std::sort(spans.begin(), spans.end());
  std::vector<std::pair<double, double>> merged;
  for (const auto& sp : spans) {
    if (!merged.empty() && sp.first <= merged.back().second)
      merged.back().second = std::max(merged.back().second, sp.second);
    else
      merged.push_back(sp);
  }
  return merged;
}

}  // namespace

double matched_edge_length(std::span<const Segment> subject,
                           std::span<const Segment> target, double tol) {
  if (tol <= 0.0) throw ValidationError("edge-match tolerance must be > 0");
  double sum = 0.0;
  for (const Segment& s : subject)
    for (const auto& [lo, hi] : overlap_union(s, target, tol)) sum += hi - lo;
  return sum;
}

std::vector<Segment> matched_subject_intervals(
    std::span<const Segment> subject, std::span<const Segment> target,
    double tol) {
  if (tol <= 0.0) throw ValidationError("edge-match tolerance must be > 0");
  std::vector<Segment> out;
  for (const Segment& s : subject)
    for (const auto& [lo, hi] : overlap_union(s, target, tol))
      out.push_back(Segment{s.orientation, s.fixed, lo, hi});
  return out;
}

PiecewiseLinearMap::PiecewiseLinearMap() : slopes_{1.0} {}

PiecewiseLinearMap::PiecewiseLinearMap(std::vector<double> knots,
                                       std::vector<double> slopes,
                                       double anchor_x, double anchor_y)
    : knots_(std::move(knots)), slopes_(std::move(slopes)) {
  if (slopes_.size() != knots_.size() + 1)
    throw ValidationError("piecewise map needs one slope per interval");
  for (double s : slopes_)
    if (!(s > 0.0)) throw ValidationError("piecewise map slopes must be > 0");
  for (std::size_t i = 1; i < knots_.size(); ++i)
    if (!(knots_[i - 1] < knots_[i]))
      throw ValidationError("piecewise map knots must be strictly increasing");
  if (knots_.empty()) {  // pure linear map; pin it at the anchor
    knots_.push_back(anchor_x);
    slopes_.push_back(slopes_.front());
  }

  // Provisional values with values_[0] = 0, then shift through the anchor.
  values_.assign(knots_.size(), 0.0);
  for (std::size_t i = 1; i < knots_.size(); ++i)
    values_[i] = values_[i - 1] + slopes_[i] * (knots_[i] - knots_[i - 1]);
  identity_ = false;  // operator() must use the provisional table here
  double shift = anchor_y - (*this)(anchor_x);
  for (double& v : values_) v += shift;

  identity_ = true;
  for (double s : slopes_) identity_ = identity_ && s == 1.0;
  for (std::size_t i = 0; i < knots_.size(); ++i)
    identity_ = identity_ && values_[i] == knots_[i];
}

double PiecewiseLinearMap::operator()(double x) const {
  if (identity_) return x;
  std::size_t k = std::upper_bound(knots_.begin(), knots_.end(), x) -
                  knots_.begin();
  if (k == 0) return values_[0] + (x - knots_[0]) * slopes_[0];
  return values_[k - 1] + (x - knots_[k - 1]) * slopes_[k];
}

double PiecewiseLinearMap::inverse(double y) const {
  if (identity_) return y;
  std::size_t k = std::upper_bound(values_.begin(), values_.end(), y) -
                  values_.begin();
  if (k == 0) return knots_[0] + (y - values_[0]) / slopes_[0];
  return knots_[k - 1] + (y - values_[k - 1]) / slopes_[k];
}

Point transform_point(Point p, const PiecewiseLinearMap& mx,
                      const PiecewiseLinearMap& my) {
  return {mx(p.x), my(p.y)};
}

Region transform_region(const Region& r, const PiecewiseLinearMap& mx,
                        const PiecewiseLinearMap& my) {
  std::vector<Rect> out;
  out.reserve(r.rects().size());
  for (const Rect& rc : r.rects())
    out.push_back(Rect{mx(rc.x_min), my(rc.y_min), mx(rc.x_max), my(rc.y_max)});
  return Region(std::move(out));
}

std::vector<Segment> transform_segments(std::span<const Segment> segments,
                                        const PiecewiseLinearMap& mx,
                                        const PiecewiseLinearMap& my) {
  std::vector<Segment> out;
  out.reserve(segments.size());
  for (const Segment& s : segments) {
    if (s.orientation == Orientation::kHorizontal)
      out.push_back(Segment{s.orientation, my(s.fixed), mx(s.lo), mx(s.hi)});
    else
      out.push_back(Segment{s.orientation, mx(s.fixed), my(s.lo), my(s.hi)});
  }
  return out;
}

}  // namespace retarget::geom
