#pragma once

#include <string>
#include <vector>

#include "retarget/env.hpp"
#include "retarget/geom.hpp"
#include "retarget/rescale.hpp"

namespace retarget::metrics {

/// Offset translating the virtual environment into the rescaled-physical
/// frame.
struct Placement {
  double x = 0.0;
  double y = 0.0;
};

/// Objective weights. The horizontal/vertical entries are per matching
/// target; this build wires one horizontal target (the main object) and one
/// vertical target (the walls).
struct Weights {
  std::vector<double> w_hor{100.0};
  std::vector<double> w_ver{30.0};
  double w_size = 5.0;
  double w_sem = 10.0;

  double total() const;
  void validate() const;  // throws ValidationError
};

struct MetricReport {
  double psi_hor = 0.0;
  double psi_ver = 0.0;
  double psi_sem = 0.0;
  double psi_size = 0.0;
  double registered_area = 0.0;
  double registered_main_surface_ratio = 0.0;
  double objective = 0.0;
};

std::string report_to_json(const MetricReport& r);
MetricReport report_from_json(const std::string& text);

// All metric operations evaluate the candidate (G, phi) in a common frame:
// physical geometry is pushed through the rescale map built on the physical
// main object, virtual geometry is translated by phi.

double psi_hor(const env::Environment& V, const env::Environment& P,
               const rescale::GainSet& G, const Placement& phi, double tol);

double psi_ver(const env::Environment& V, const env::Environment& P,
               const rescale::GainSet& G, const Placement& phi, double tol);

struct SizeResult {
  double ratio = 0.0;
  double registered_area = 0.0;
};
SizeResult psi_size(const env::Environment& V, const env::Environment& P,
                    const rescale::GainSet& G, const Placement& phi);

double psi_sem(const env::Environment& V, const env::Environment& P,
               const rescale::GainSet& G, const Placement& phi);

double registered_main_surface_ratio(const env::Environment& V,
                                     const env::Environment& P,
                                     const rescale::GainSet& G,
                                     const Placement& phi);

struct ObjectiveResult {
  double value = 0.0;
  MetricReport report;
};
ObjectiveResult objective(const env::Environment& V, const env::Environment& P,
                          const rescale::GainSet& G, const Placement& phi,
                          const Weights& weights, double tol);

/// Precomputed evaluation state for one (virtual, physical) pair. Evaluating
/// a candidate allocates nothing large and is safe to call concurrently.
class ObjectiveEvaluator {
 public:
  ObjectiveEvaluator(const env::Environment& V, const env::Environment& P,
                     Weights weights, double tol);

  ObjectiveResult evaluate(const rescale::GainSet& g,
                           const Placement& phi) const;
  const Weights& weights() const { return weights_; }
  double tol() const { return tol_; }
  const rescale::GridPartition& partition() const { return partition_; }

 private:
  Weights weights_;
  double tol_;
  rescale::GridPartition partition_;

  // Virtual side, untranslated (phi applied on the fly).
  std::vector<geom::Segment> v_main_edges_;
  std::vector<geom::Segment> v_walls_;
  std::vector<geom::Rect> v_foot_cells_;
  std::vector<geom::Rect> v_free_cells_;
  std::vector<geom::Rect> v_obstacle_cells_;
  geom::Rect v_main_rect_;
  double v_main_perimeter_ = 0.0;
  double v_wall_length_ = 0.0;
  double v_foot_area_ = 0.0;
  double v_main_area_ = 0.0;

  // Physical side, untransformed (mapped per candidate).
  std::vector<geom::Segment> p_main_edges_;
  std::vector<geom::Segment> p_walls_;
  std::vector<geom::Rect> p_foot_cells_;
  std::vector<geom::Rect> p_free_cells_;
  std::vector<geom::Rect> p_obstacle_cells_;
  geom::Rect p_main_rect_;
};

}  // namespace retarget::metrics
