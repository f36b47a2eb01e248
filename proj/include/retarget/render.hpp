#pragma once

#include <string>

#include "retarget/env.hpp"
#include "retarget/optimize.hpp"

namespace retarget::render {

struct RenderStyle {
  double scale = 60.0;   // px per meter
  double margin = 0.5;   // meters around the drawing
  std::string outline_color = "#000000";
  std::string intersection_color = "#9aa7b0";
  std::string matched_color = "#2e9e4f";
  std::string main_surface_color = "#f59116";
  std::string mismatch_color = "#d94040";
  double outline_width = 2.0;
  double matched_width = 4.0;
};

/// Deterministic SVG overlay of a registration result: both footprints,
/// intersection shading, mismatch/obstacle overlap in red, the registered
/// main surface in orange, matched edges in green, plus a legend. Identical
/// inputs yield byte-identical output.
std::string render_registration(const env::Environment& V,
                                const env::Environment& P,
                                const optimize::RegistrationResult& result,
                                const RenderStyle& style = {});

}  // namespace retarget::render
