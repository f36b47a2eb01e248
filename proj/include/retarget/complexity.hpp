#pragma once

#include <functional>
#include <string>

#include "retarget/env.hpp"

namespace retarget::complexity {

/// Interchangeable evaluator mapping an environment to its C(E) term.
/// Must return a positive value for any environment with free space.
using ComplexityKernel = std::function<double(const env::Environment&)>;

/// Mean distance from free-space sample points (grid of the given step,
/// strictly inside free space) to the nearest obstacle or wall. A documented
/// stand-in for the reference complexity term; published C(E) values are
/// injected via constant_kernel for table reproductions.
ComplexityKernel clearance_kernel(double grid_step = 0.2);

/// Kernel holding an externally published C(E) value.
ComplexityKernel constant_kernel(double c);

/// (sum of ordered pairwise object-center distances / 2N)^2, every object
/// including the main one. Zero or one object gives 0.
double object_scatteredness(const env::Environment& e);

struct ComplexityReport {
  double area = 0.0;  // A(E), total floor area
  double c = 0.0;     // C(E)
  double os = 0.0;    // OS(E)
  double sc = 0.0;    // sqrt(A) * C + OS
};

ComplexityReport spatial_complexity(const env::Environment& e,
                                    const ComplexityKernel& kernel);

/// |ln(sc_a / sc_b)|; symmetric in its arguments.
double spatial_dissimilarity(const ComplexityReport& a,
                             const ComplexityReport& b);

struct SmdResult {
  double value = 0.0;
  bool degenerate = false;  // sd was clamped up to the 1e-9 floor
};

SmdResult spatial_matching_difficulty(double sd, double virt_main_area,
                                      double phys_main_area);

/// Baseline complexity ratio c_phys / c_virt.
double complexity_ratio(double c_virt, double c_phys);

struct PairReport {
  double sd = 0.0;
  double smd = 0.0;
  bool smd_degenerate = false;
  double cr = 0.0;
  ComplexityReport virt;
  ComplexityReport phys;
};

PairReport compare_environments(const env::Environment& V,
                                const env::Environment& P,
                                const ComplexityKernel& kernel_virt,
                                const ComplexityKernel& kernel_phys);

std::string complexity_report_to_json(const std::string& name,
                                      const ComplexityReport& r);
std::string pair_report_to_json(const PairReport& r);

}  // namespace retarget::complexity
