#pragma once

#include <array>
#include <span>
#include <vector>

#include "retarget/env.hpp"
#include "retarget/geom.hpp"

namespace retarget::rescale {

/// Per-axis translation gain bounds; each gain must stay inside (lo, hi).
struct GainBounds {
  double lo = 0.86;
  double hi = 1.26;
};

/// Allowed range for the two extreme gain ratios min(Gx)/max(Gy) and
/// max(Gx)/min(Gy).
struct AlphaRange {
  double lo = 0.92;
  double hi = 1.23;
};

/// Three x-axis gains (left, middle, right bands) and three y-axis gains
/// (bottom, middle, top bands).
struct GainSet {
  std::array<double, 3> gx{1.0, 1.0, 1.0};
  std::array<double, 3> gy{1.0, 1.0, 1.0};

  static GainSet identity() { return {}; }
  static GainSet uniform(double gx_all, double gy_all) {
    return {{gx_all, gx_all, gx_all}, {gy_all, gy_all, gy_all}};
  }
  double min_gx() const;
  double max_gx() const;
  double min_gy() const;
  double max_gy() const;
  /// Largest |g - 1| over all six gains.
  double max_deviation() const;
};

/// Signed violation amounts for the six gain bounds and the four ratio
/// constraints; a value <= 0 means the constraint is satisfied.
struct FeasibilityReport {
  std::array<double, 6> gain_violations{};   // gx0..2 then gy0..2
  std::array<double, 4> ratio_violations{};  // r1>=lo, r1<=hi, r2>=lo, r2<=hi
  bool feasible = false;

  double total_violation() const;
  std::string describe() const;  // names the violated constraints
};

FeasibilityReport check_constraints(const GainSet& g, const AlphaRange& alpha,
                                    const GainBounds& bounds = {});

/// The nine-grid partition: the main object's edges extended across the room.
struct GridPartition {
  double x1 = 0.0, x2 = 0.0;  // main-object x extent
  double y1 = 0.0, y2 = 0.0;  // main-object y extent
};

/// The separable piecewise-linear coordinate map induced by a gain set over a
/// grid partition. Anchored so the anchor point is a fixed point of the map
/// (default: the main object's min corner).
class RescaleMap {
 public:
  RescaleMap(const GridPartition& partition, const GainSet& gains);
  RescaleMap(const GridPartition& partition, const GainSet& gains,
             geom::Point anchor);

  const GridPartition& partition() const { return partition_; }
  const GainSet& gains() const { return gains_; }
  geom::Point anchor() const { return anchor_; }
  const geom::PiecewiseLinearMap& mx() const { return mx_; }
  const geom::PiecewiseLinearMap& my() const { return my_; }

  geom::Point apply(geom::Point p) const { return {mx_(p.x), my_(p.y)}; }
  geom::Point invert(geom::Point p) const {
    return {mx_.inverse(p.x), my_.inverse(p.y)};
  }

 private:
  GridPartition partition_;
  GainSet gains_;
  geom::Point anchor_;
  geom::PiecewiseLinearMap mx_, my_;
};

/// Validates the gain set against Eq-style threshold constraints and builds
/// the map from the environment's main object. Throws ConstraintError with
/// the failed constraints listed.
RescaleMap make_rescale_map(const env::Environment& e, const GainSet& g,
                            const AlphaRange& alpha = {},
                            const GainBounds& bounds = {});

geom::Region transform_region(const geom::Region& r, const RescaleMap& map);
std::vector<geom::Segment> transform_segments(
    std::span<const geom::Segment> segments, const RescaleMap& map);

/// The runtime gain field: band gains with linear blending within l_s of a
/// band boundary. Within a band narrower than 2*l_s the blend truncates at
/// the band midpoint, so the field stays single-valued and continuous.
class SmoothedGainField {
 public:
  SmoothedGainField(RescaleMap map, double smoothing_half_width);

  double smoothing_half_width() const { return l_s_; }
  const RescaleMap& map() const { return map_; }

  double gain_x_at(double x) const;
  double gain_y_at(double y) const;
  std::pair<double, double> gain_at(geom::Point p) const {
    return {gain_x_at(p.x), gain_y_at(p.y)};
  }

 private:
  RescaleMap map_;
  double l_s_;
};

struct WalkSample {
  geom::Point physical;
  geom::Point virtual_pos;
  double gx = 1.0;
  double gy = 1.0;
};

/// Integrates the smoothed gain field along a physical polyline: each
/// integration step of length <= step contributes a virtual displacement
/// (gx*dx, gy*dy) with gains evaluated at the segment midpoint. The virtual
/// path starts at the physical start point.
std::vector<WalkSample> simulate_walk(const SmoothedGainField& field,
                                      const geom::Region& footprint,
                                      std::span<const geom::Point> path,
                                      double step = 0.01);

}  // namespace retarget::rescale
