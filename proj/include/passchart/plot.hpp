#pragma once

#include <optional>
#include <span>

#include "passchart/image.hpp"
#include "passchart/surface.hpp"

namespace passchart {

enum class ColorScale {
  Sequential,  // low to high, for densities and probabilities
  Diverging,   // symmetric about zero, for difference surfaces
};

struct PlotOptions {
  ColorScale scale = ColorScale::Sequential;
  int pixels_per_cell = 4;
  std::optional<double> lo;  // color limits; data range when absent
  std::optional<double> hi;
  bool draw_scrimmage = true;
};

Rgb sequential_color(double t);  // t in [0, 1]
Rgb diverging_color(double t);   // t in [-1, 1], white at 0

/// Heatmap with downfield running up the image and the offense's right to the
/// image right, optionally with pass locations drawn on top.
RasterImage render_heatmap(const SurfaceGrid& grid, const PlotOptions& options = {},
                           std::span<const FieldCoordinate> overlay = {});

}  // namespace passchart
