#pragma once

#include <array>
#include <vector>

#include "passchart/image.hpp"

namespace passchart {

class FieldNotFound : public Error {
 public:
  using Error::Error;
};

class DegenerateQuad : public Error {
 public:
  using Error::Error;
};

/// Projective map between image planes, normalized so the bottom-right entry is 1.
class Homography {
 public:
  Homography() = default;  // identity
  explicit Homography(const std::array<double, 9>& row_major);

  double operator()(int row, int col) const { return m_[static_cast<std::size_t>(row * 3 + col)]; }
  const std::array<double, 9>& coefficients() const noexcept { return m_; }

  PixelPoint apply(PixelPoint p) const noexcept;
  double determinant() const noexcept;
  /// Throws DegenerateQuad when the matrix is singular.
  Homography inverse() const;

 private:
  std::array<double, 9> m_{1, 0, 0, 0, 1, 0, 0, 0, 1};
};

/// Chart depth in yards: 10 behind scrimmage plus 55 or 75 beyond it.
enum class ChartDepth { Short = 65, Long = 85 };

constexpr double total_yards(ChartDepth depth) noexcept { return static_cast<int>(depth); }
constexpr double yards_beyond_scrimmage(ChartDepth depth) noexcept {
  return total_yards(depth) - kYardsBehindScrimmage;
}
ChartDepth chart_depth_from_yards(int yards);

/// Field trapezoid in source-image pixels.
struct FieldQuad {
  // top-left, top-right, bottom-right, bottom-left
  std::array<PixelPoint, 4> corners;
  ChartDepth depth = ChartDepth::Short;

  double top_width() const noexcept;
  double bottom_width() const noexcept;
  double mean_height() const noexcept;
  bool is_convex() const noexcept;
};

/// Depth from the quad's height-to-width ratio, split at the midpoint of the
/// two field aspect ratios.
ChartDepth infer_depth(const std::array<PixelPoint, 4>& corners);

/// Largest connected non-background region, reduced to its four extreme
/// points. Throws FieldNotFound when nothing field-like is present.
FieldQuad detect_field_quad(const RasterImage& image);

/// Direct linear transform from four correspondences. Throws DegenerateQuad
/// when three source corners are collinear.
Homography solve_homography(const std::array<PixelPoint, 4>& src,
                            const std::array<PixelPoint, 4>& dst);

/// Corners of a width x height rectangle in pixel-center coordinates, in
/// FieldQuad corner order.
std::array<PixelPoint, 4> rectangle_corners(int width, int height);

/// Nearest-neighbour inverse mapping: output (u, v) samples `image` at
/// H^-1(u, v); samples falling outside the source are black.
RasterImage warp(const RasterImage& image, const Homography& h, int out_width, int out_height);

/// Rectified bird's-eye frame: column 0 is the left sideline, row 0 the far
/// end of the chart, and the last row sits 10 yards behind scrimmage.
struct FieldFrame {
  int width = 0;
  int height = 0;
  ChartDepth depth = ChartDepth::Short;

  PixelPoint to_pixel(const FieldCoordinate& c) const noexcept;
  FieldCoordinate to_field(const PixelPoint& p) const noexcept;
  double pixels_per_yard() const noexcept;
};

/// Frame whose width keeps the resolution of the quad's bottom edge.
FieldFrame frame_for(const FieldQuad& quad);

struct RectifiedChart {
  RasterImage image;
  FieldFrame frame;
  FieldQuad quad;
};

RectifiedChart rectify(const RasterImage& image, const FieldQuad& quad);

struct PixelRect {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;  // inclusive
  int y1 = 0;  // inclusive

  bool contains(int x, int y) const noexcept { return x >= x0 && x <= x1 && y >= y0 && y <= y1; }
};

/// Sideline-number bands: one per 10-yard marking beyond scrimmage (6 for the
/// short chart, 8 for the long one) on each sideline.
std::vector<PixelRect> sideline_bands(const FieldFrame& frame);

/// Lateral extent of the number glyphs, as fractions of the field width.
inline constexpr double kSidelineBandInner = 0.02;
inline constexpr double kSidelineBandOuter = 0.11;
inline constexpr double kSidelineBandHalfYards = 2.0;

bool is_white(const Rgb& c) noexcept;

/// Replaces white pixels inside the sideline bands with the band's dominant
/// non-white colour. Pixels outside the bands are never modified.
RasterImage scrub_sideline_numbers(const RasterImage& image, ChartDepth depth);

}  // namespace passchart
