#include "passchart/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace passchart {

namespace {

struct Stop {
  double t;
  Rgb c;
};

Rgb interpolate(std::span<const Stop> stops, double t) {
  t = std::clamp(t, stops.front().t, stops.back().t);
  for (std::size_t i = 1; i < stops.size(); ++i) {
    if (t <= stops[i].t) {
      const auto& a = stops[i - 1];
      const auto& b = stops[i];
      const double u = (t - a.t) / (b.t - a.t);
      auto mix = [u](std::uint8_t x, std::uint8_t y) {
        return static_cast<std::uint8_t>(std::lround(x + u * (y - x)));
      };
      return {mix(a.c.r, b.c.r), mix(a.c.g, b.c.g), mix(a.c.b, b.c.b)};
    }
  }
  return stops.back().c;
}

// Coarse samples of viridis and of a blue-white-red ramp.
constexpr std::array<Stop, 5> kSequential{{{0.0, {68, 1, 84}},
                                           {0.25, {59, 82, 139}},
                                           {0.5, {33, 145, 140}},
                                           {0.75, {94, 201, 98}},
                                           {1.0, {253, 231, 37}}}};
constexpr std::array<Stop, 5> kDiverging{{{-1.0, {5, 48, 97}},
                                          {-0.5, {67, 147, 195}},
                                          {0.0, {247, 247, 247}},
                                          {0.5, {214, 96, 77}},
                                          {1.0, {103, 0, 31}}}};

}  // namespace

Rgb sequential_color(double t) { return interpolate(kSequential, t); }
Rgb diverging_color(double t) { return interpolate(kDiverging, t); }

RasterImage render_heatmap(const SurfaceGrid& grid, const PlotOptions& options,
                           std::span<const FieldCoordinate> overlay) {
  const GridGeometry& g = grid.geometry();
  const int s = std::max(1, options.pixels_per_cell);
  RasterImage img(g.ny * s, g.nx * s);

  double lo = options.lo.value_or(grid.min());
  double hi = options.hi.value_or(grid.max());
  if (options.scale == ColorScale::Diverging && !options.lo && !options.hi) {
    const double m = std::max(std::abs(lo), std::abs(hi));
    lo = -m;
    hi = m;
  }
  auto color = [&](double v) {
    if (options.scale == ColorScale::Diverging) {
      const double m = std::max(std::abs(lo), std::abs(hi));
      return diverging_color(m > 0.0 ? v / m : 0.0);
    }
    return sequential_color(hi > lo ? (v - lo) / (hi - lo) : 0.5);
  };

  for (int ix = 0; ix < g.nx; ++ix) {
    const int row0 = (g.nx - 1 - ix) * s;
    for (int iy = 0; iy < g.ny; ++iy) {
      const Rgb c = color(grid.at(ix, iy));
      for (int dy = 0; dy < s; ++dy) {
        for (int dx = 0; dx < s; ++dx) img.at(iy * s + dx, row0 + dy) = c;
      }
    }
  }

  auto to_px = [&](const FieldCoordinate& c) {
    const double col = (c.lateral - g.y_min) / (g.y_max - g.y_min) * img.width();
    const double row = (g.x_max - c.downfield) / (g.x_max - g.x_min) * img.height();
    return PixelPoint{col, row};
  };
  if (options.draw_scrimmage && g.x_min < 0.0 && g.x_max > 0.0) {
    const int row = static_cast<int>(std::lround(to_px({0.0, 0.0}).y));
    for (int x = 0; x < img.width(); ++x) {
      if (img.contains(x, row)) img.at(x, row) = {40, 80, 220};
    }
  }
  for (const auto& c : overlay) {
    const PixelPoint p = to_px(c);
    const int cx = static_cast<int>(std::lround(p.x));
    const int cy = static_cast<int>(std::lround(p.y));
    for (int dy = -3; dy <= 3; ++dy) {
      for (int dx = -3; dx <= 3; ++dx) {
        const int d2 = dx * dx + dy * dy;
        if (d2 > 9 || !img.contains(cx + dx, cy + dy)) continue;
        img.at(cx + dx, cy + dy) = d2 > 4 ? Rgb{0, 0, 0} : Rgb{255, 255, 255};
      }
    }
  }
  return img;
}

}  // namespace passchart
