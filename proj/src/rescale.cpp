#include "retarget/rescale.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "retarget/errors.hpp"

namespace retarget::rescale {

double GainSet::min_gx() const { return *std::min_element(gx.begin(), gx.end()); }
double GainSet::max_gx() const { return *std::max_element(gx.begin(), gx.end()); }
double GainSet::min_gy() const { return *std::min_element(gy.begin(), gy.end()); }
double GainSet::max_gy() const { return *std::max_element(gy.begin(), gy.end()); }

double GainSet::max_deviation() const {
  double d = 0.0;
  for (double g : gx) d = std::max(d, std::abs(g - 1.0));
  for (double g : gy) d = std::max(d, std::abs(g - 1.0));
  return d;
}

double FeasibilityReport::total_violation() const {
  double sum = 0.0;
  for (double v : gain_violations) sum += std::max(0.0, v);
  for (double v : ratio_violations) sum += std::max(0.0, v);
  return sum;
}

std::string FeasibilityReport::describe() const {
  static const char* gain_names[6] = {"gx[0]", "gx[1]", "gx[2]",
                                      "gy[0]", "gy[1]", "gy[2]"};
  static const char* ratio_names[4] = {
      "min(Gx)/max(Gy) below alpha_lo", "min(Gx)/max(Gy) above alpha_hi",
      "max(Gx)/min(Gy) below alpha_lo", "max(Gx)/min(Gy) above alpha_hi"};
  std::ostringstream out;
  bool first = true;
  for (int i = 0; i < 6; ++i) {
    if (gain_violations[i] > 0.0) {
      out << (first ? "" : "; ") << gain_names[i] << " outside gain bounds by "
          << gain_violations[i];
      first = false;
    }
  }
  for (int i = 0; i < 4; ++i) {
    if (ratio_violations[i] > 0.0) {
      out << (first ? "" : "; ") << ratio_names[i] << " by "
          << ratio_violations[i];
      first = false;
    }
  }
  return first ? std::string("feasible") : out.str();
}

FeasibilityReport check_constraints(const GainSet& g, const AlphaRange& alpha,
                                    const GainBounds& bounds) {
  FeasibilityReport report;
  for (int i = 0; i < 3; ++i) {
    report.gain_violations[i] =
        std::max(bounds.lo - g.gx[i], g.gx[i] - bounds.hi);
    report.gain_violations[3 + i] =
        std::max(bounds.lo - g.gy[i], g.gy[i] - bounds.hi);
  }
  double r1 = g.min_gx() / g.max_gy();
  double r2 = g.max_gx() / g.min_gy();
  report.ratio_violations[0] = alpha.lo - r1;
  report.ratio_violations[1] = r1 - alpha.hi;
  report.ratio_violations[2] = alpha.lo - r2;
  report.ratio_violations[3] = r2 - alpha.hi;
  report.feasible = true;
  for (double v : report.gain_violations)
    report.feasible = report.feasible && v <= 0.0;
  for (double v : report.ratio_violations)
    report.feasible = report.feasible && v <= 0.0;
  return report;
}

namespace {

geom::PiecewiseLinearMap axis_map(double b1, double b2,
                                  const std::array<double, 3>& gains,
                                  double anchor_x, double anchor_y) {
  return geom::PiecewiseLinearMap({b1, b2}, {gains[0], gains[1], gains[2]},
                                  anchor_x, anchor_y);
}

}  // namespace

RescaleMap::RescaleMap(const GridPartition& partition, const GainSet& gains)
    : RescaleMap(partition, gains, geom::Point{partition.x1, partition.y1}) {}

RescaleMap::RescaleMap(const GridPartition& partition, const GainSet& gains,
                       geom::Point anchor)
    : partition_(partition),
      gains_(gains),
      anchor_(anchor),
      mx_(axis_map(partition.x1, partition.x2, gains.gx, anchor.x, anchor.x)),
      my_(axis_map(partition.y1, partition.y2, gains.gy, anchor.y, anchor.y)) {
  if (!(partition.x1 < partition.x2 && partition.y1 < partition.y2))
    throw ValidationError("grid partition must have positive extent");
}

RescaleMap make_rescale_map(const env::Environment& e, const GainSet& g,
                            const AlphaRange& alpha, const GainBounds& bounds) {
  FeasibilityReport report = check_constraints(g, alpha, bounds);
  if (!report.feasible)
    throw ConstraintError("infeasible gain set: " + report.describe());
  const geom::Rect& main = e.main_object().rect;
  return RescaleMap(GridPartition{main.x_min, main.x_max, main.y_min,
                                  main.y_max},
                    g);
}

geom::Region transform_region(const geom::Region& r, const RescaleMap& map) {
  return geom::transform_region(r, map.mx(), map.my());
}

std::vector<geom::Segment> transform_segments(
    std::span<const geom::Segment> segments, const RescaleMap& map) {
  return geom::transform_segments(segments, map.mx(), map.my());
}

SmoothedGainField::SmoothedGainField(RescaleMap map,
                                     double smoothing_half_width)
    : map_(std::move(map)), l_s_(smoothing_half_width) {
  if (!(l_s_ > 0.0))
    throw ValidationError("smoothing half-width must be > 0");
}

namespace {

// One axis of the smoothed field. Boundaries b1 < b2 split the axis into
// three bands with the given gains. Crossing a boundary blends linearly from
// the boundary value (the mean of the two band gains) back to the band gain
// over the blend half-width of that side: l_s, truncated to half the band
// width so blends inside a narrow middle band never overlap.
double smoothed_gain(double c, double b1, double b2,
                     const std::array<double, 3>& gains, double l_s) {
  double half_mid = 0.5 * (b2 - b1);
  if (c < b1) {
    double d = b1 - c;  // distance into the left band
    if (d >= l_s) return gains[0];
    double mid = 0.5 * (gains[0] + gains[1]);
    return mid + (gains[0] - mid) * (d / l_s);
  }
  if (c > b2) {
    double d = c - b2;
    if (d >= l_s) return gains[2];
    double mid = 0.5 * (gains[1] + gains[2]);
    return mid + (gains[2] - mid) * (d / l_s);
  }
  // Inside the middle band; the nearer boundary governs.
  double d1 = c - b1;
  double d2 = b2 - c;
  double h = std::min(l_s, half_mid);
  if (d1 <= d2 && d1 < h) {
    double mid = 0.5 * (gains[0] + gains[1]);
    return mid + (gains[1] - mid) * (d1 / h);
  }
  if (d2 < d1 && d2 < h) {
    double mid = 0.5 * (gains[1] + gains[2]);
    return mid + (gains[1] - mid) * (d2 / h);
  }
  return gains[1];
}

}  // namespace

double SmoothedGainField::gain_x_at(double x) const {
  return smoothed_gain(x, map_.partition().x1, map_.partition().x2,
                       map_.gains().gx, l_s_);
}

double SmoothedGainField::gain_y_at(double y) const {
  return smoothed_gain(y, map_.partition().y1, map_.partition().y2,
                       map_.gains().gy, l_s_);
}

std::vector<WalkSample> simulate_walk(const SmoothedGainField& field,
                                      const geom::Region& footprint,
                                      std::span<const geom::Point> path,
                                      double step) {
  if (!(step > 0.0)) throw ValidationError("integration step must be > 0");
  if (path.empty()) return {};
  for (const geom::Point& p : path)
    if (!footprint.contains(p)) {
      std::ostringstream out;
      out << "path point (" << p.x << ", " << p.y << ") outside footprint";
      throw ValidationError(out.str());
    }

  std::vector<WalkSample> samples;
  geom::Point virt = path.front();
  auto [gx0, gy0] = field.gain_at(path.front());
  samples.push_back(WalkSample{path.front(), virt, gx0, gy0});

  for (std::size_t s = 1; s < path.size(); ++s) {
    geom::Point a = path[s - 1];
    geom::Point b = path[s];
    double len = std::hypot(b.x - a.x, b.y - a.y);
    int n = std::max(1, static_cast<int>(std::ceil(len / step)));
    for (int i = 0; i < n; ++i) {
      double t0 = static_cast<double>(i) / n;
      double t1 = static_cast<double>(i + 1) / n;
      geom::Point p0{a.x + t0 * (b.x - a.x), a.y + t0 * (b.y - a.y)};
      geom::Point p1{a.x + t1 * (b.x - a.x), a.y + t1 * (b.y - a.y)};
      geom::Point mid{0.5 * (p0.x + p1.x), 0.5 * (p0.y + p1.y)};
      auto [gx, gy] = field.gain_at(mid);
      virt.x += gx * (p1.x - p0.x);
      virt.y += gy * (p1.y - p0.y);
      auto [sgx, sgy] = field.gain_at(p1);
      samples.push_back(WalkSample{p1, virt, sgx, sgy});
    }
  }
  return samples;
}

}  // namespace retarget::rescale
