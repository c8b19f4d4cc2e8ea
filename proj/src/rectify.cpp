#include "passchart/rectify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>

#include <Eigen/Dense>

namespace passchart {

namespace {

// Anything at least this bright (max channel) belongs to the chart, not the
// backdrop.
constexpr int kBackgroundMaxChannel = 30;
constexpr double kMinFieldFraction = 0.05;

double cross(PixelPoint o, PixelPoint a, PixelPoint b) noexcept {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

double distance(PixelPoint a, PixelPoint b) noexcept { return std::hypot(a.x - b.x, a.y - b.y); }

}  // namespace

Homography::Homography(const std::array<double, 9>& row_major) : m_(row_major) {
  if (m_[8] == 0.0) throw DegenerateQuad("homography has zero scale entry");
  if (m_[8] != 1.0) {
    const double s = m_[8];
    for (double& v : m_) v /= s;
  }
}

PixelPoint Homography::apply(PixelPoint p) const noexcept {
  const double w = m_[6] * p.x + m_[7] * p.y + m_[8];
  return {(m_[0] * p.x + m_[1] * p.y + m_[2]) / w, (m_[3] * p.x + m_[4] * p.y + m_[5]) / w};
}

double Homography::determinant() const noexcept {
  const auto& m = m_;
  return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
         m[2] * (m[3] * m[7] - m[4] * m[6]);
}

Homography Homography::inverse() const {
  const double det = determinant();
  if (std::abs(det) < 1e-15) throw DegenerateQuad("homography is singular");
  const auto& m = m_;
  std::array<double, 9> inv{
      m[4] * m[8] - m[5] * m[7], m[2] * m[7] - m[1] * m[8], m[1] * m[5] - m[2] * m[4],
      m[5] * m[6] - m[3] * m[8], m[0] * m[8] - m[2] * m[6], m[2] * m[3] - m[0] * m[5],
      m[3] * m[7] - m[4] * m[6], m[1] * m[6] - m[0] * m[7], m[0] * m[4] - m[1] * m[3]};
  if (inv[8] == 0.0) throw DegenerateQuad("inverse homography maps origin to infinity");
  return Homography(inv);
}

ChartDepth chart_depth_from_yards(int yards) {
  if (yards == 65) return ChartDepth::Short;
  if (yards == 85) return ChartDepth::Long;
  throw Error("chart depth must be 65 or 85 yards, got " + std::to_string(yards));
}

double FieldQuad::top_width() const noexcept { return distance(corners[0], corners[1]); }
double FieldQuad::bottom_width() const noexcept { return distance(corners[3], corners[2]); }
double FieldQuad::mean_height() const noexcept {
  return 0.5 * (distance(corners[0], corners[3]) + distance(corners[1], corners[2]));
}

bool FieldQuad::is_convex() const noexcept {
  double sign = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    const double c = cross(corners[i], corners[(i + 1) % 4], corners[(i + 2) % 4]);
    if (c == 0.0) return false;
    if (sign == 0.0) sign = c;
    if ((c > 0) != (sign > 0)) return false;
  }
  return true;
}

ChartDepth infer_depth(const std::array<PixelPoint, 4>& corners) {
  const FieldQuad quad{corners, ChartDepth::Short};
  const double mean_width = 0.5 * (quad.top_width() + quad.bottom_width());
  if (mean_width <= 0.0) throw FieldNotFound("field quad has zero width");
  const double threshold = 0.5 * (65.0 + 85.0) / kFieldWidthYards;
  return quad.mean_height() / mean_width > threshold ? ChartDepth::Long : ChartDepth::Short;
}

FieldQuad detect_field_quad(const RasterImage& image) {
  const int w = image.width();
  const int h = image.height();
  if (w == 0 || h == 0) throw FieldNotFound("empty image");

  auto is_field = [&](int x, int y) {
    const Rgb& c = image.at(x, y);
    return std::max({c.r, c.g, c.b}) > kBackgroundMaxChannel;
  };

  // Label 4-connected components, keeping only the largest.
  std::vector<std::int32_t> label(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), -1);
  std::int32_t best_label = -1;
  std::size_t best_size = 0;
  std::int32_t next_label = 0;
  std::deque<std::pair<int, int>> queue;
  for (int y0 = 0; y0 < h; ++y0) {
    for (int x0 = 0; x0 < w; ++x0) {
      const std::size_t idx0 = static_cast<std::size_t>(y0) * w + x0;
      if (label[idx0] >= 0 || !is_field(x0, y0)) continue;
      const std::int32_t current = next_label++;
      std::size_t size = 0;
      label[idx0] = current;
      queue.emplace_back(x0, y0);
      while (!queue.empty()) {
        auto [x, y] = queue.front();
        queue.pop_front();
        ++size;
        constexpr int dx[] = {1, -1, 0, 0};
        constexpr int dy[] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
          const int nx = x + dx[k];
          const int ny = y + dy[k];
          if (!image.contains(nx, ny)) continue;
          const std::size_t idx = static_cast<std::size_t>(ny) * w + nx;
          if (label[idx] >= 0 || !is_field(nx, ny)) continue;
          label[idx] = current;
          queue.emplace_back(nx, ny);
        }
      }
      if (size > best_size) {
        best_size = size;
        best_label = current;
      }
    }
  }
  if (best_label < 0 ||
      static_cast<double>(best_size) < kMinFieldFraction * static_cast<double>(w) * h) {
    throw FieldNotFound("no field-coloured region found");
  }

  // The four extreme points of a point set are vertices of its convex hull.
  constexpr double inf = std::numeric_limits<double>::infinity();
  double min_sum = inf, max_sum = -inf, min_diff = inf, max_diff = -inf;
  std::array<PixelPoint, 4> corners{};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (label[static_cast<std::size_t>(y) * w + x] != best_label) continue;
      const double sum = x + y;
      const double diff = x - y;
      const PixelPoint p{static_cast<double>(x), static_cast<double>(y)};
      if (sum < min_sum) { min_sum = sum; corners[0] = p; }
      if (diff > max_diff) { max_diff = diff; corners[1] = p; }
      if (sum > max_sum) { max_sum = sum; corners[2] = p; }
      if (diff < min_diff) { min_diff = diff; corners[3] = p; }
    }
  }

  FieldQuad quad{corners, ChartDepth::Short};
  if (!quad.is_convex()) throw FieldNotFound("detected field corners are not convex");
  if (quad.top_width() > quad.bottom_width() * 1.02) {
    throw FieldNotFound("detected field is wider at the top than the bottom");
  }
  quad.depth = infer_depth(corners);
  return quad;
}

Homography solve_homography(const std::array<PixelPoint, 4>& src,
                            const std::array<PixelPoint, 4>& dst) {
  double scale = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = i + 1; j < 4; ++j) scale = std::max(scale, distance(src[i], src[j]));
  }
  if (scale == 0.0) throw DegenerateQuad("source corners coincide");
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& a = src[i];
    const auto& b = src[(i + 1) % 4];
    const auto& c = src[(i + 2) % 4];
    if (std::abs(cross(a, b, c)) < 1e-9 * scale * scale) {
      throw DegenerateQuad("three source corners are collinear");
    }
  }

  // x' (h6 x + h7 y + 1) = h0 x + h1 y + h2, likewise for y'.
  Eigen::Matrix<double, 8, 8> a;
  Eigen::Matrix<double, 8, 1> b;
  for (int i = 0; i < 4; ++i) {
    const double x = src[static_cast<std::size_t>(i)].x;
    const double y = src[static_cast<std::size_t>(i)].y;
    const double u = dst[static_cast<std::size_t>(i)].x;
    const double v = dst[static_cast<std::size_t>(i)].y;
    a.row(2 * i) << x, y, 1, 0, 0, 0, -u * x, -u * y;
    a.row(2 * i + 1) << 0, 0, 0, x, y, 1, -v * x, -v * y;
    b(2 * i) = u;
    b(2 * i + 1) = v;
  }
  Eigen::FullPivLU<Eigen::Matrix<double, 8, 8>> lu(a);
  if (!lu.isInvertible()) throw DegenerateQuad("correspondence system is singular");
  const Eigen::Matrix<double, 8, 1> h = lu.solve(b);
  Homography result({h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), 1.0});
  if (std::abs(result.determinant()) < 1e-15) throw DegenerateQuad("homography is singular");
  return result;
}

std::array<PixelPoint, 4> rectangle_corners(int width, int height) {
  const double r = width - 1;
  const double b = height - 1;
  return {PixelPoint{0, 0}, PixelPoint{r, 0}, PixelPoint{r, b}, PixelPoint{0, b}};
}

RasterImage warp(const RasterImage& image, const Homography& h, int out_width, int out_height) {
  const Homography inv = h.inverse();
  const auto& m = inv.coefficients();
  RasterImage out(out_width, out_height);
  for (int v = 0; v < out_height; ++v) {
    for (int u = 0; u < out_width; ++u) {
      const double w = m[6] * u + m[7] * v + m[8];
      if (w == 0.0) continue;
      const double sx = (m[0] * u + m[1] * v + m[2]) / w;
      const double sy = (m[3] * u + m[4] * v + m[5]) / w;
      const auto x = static_cast<long>(std::lround(sx));
      const auto y = static_cast<long>(std::lround(sy));
      if (x < 0 || y < 0 || x >= image.width() || y >= image.height()) continue;
      out.at(u, v) = image.at(static_cast<int>(x), static_cast<int>(y));
    }
  }
  return out;
}

PixelPoint FieldFrame::to_pixel(const FieldCoordinate& c) const noexcept {
  return {(c.lateral / kFieldWidthYards + 0.5) * (width - 1),
          (yards_beyond_scrimmage(depth) - c.downfield) / total_yards(depth) * (height - 1)};
}

FieldCoordinate FieldFrame::to_field(const PixelPoint& p) const noexcept {
  return {yards_beyond_scrimmage(depth) - p.y / (height - 1) * total_yards(depth),
          (p.x / (width - 1) - 0.5) * kFieldWidthYards};
}

double FieldFrame::pixels_per_yard() const noexcept { return (width - 1) / kFieldWidthYards; }

FieldFrame frame_for(const FieldQuad& quad) {
  FieldFrame frame;
  frame.depth = quad.depth;
  frame.width = static_cast<int>(std::lround(quad.bottom_width())) + 1;
  frame.height =
      static_cast<int>(std::lround((frame.width - 1) * total_yards(quad.depth) / kFieldWidthYards)) +
      1;
  return frame;
}

RectifiedChart rectify(const RasterImage& image, const FieldQuad& quad) {
  RectifiedChart out;
  out.quad = quad;
  out.frame = frame_for(quad);
  const Homography h =
      solve_homography(quad.corners, rectangle_corners(out.frame.width, out.frame.height));
  out.image = warp(image, h, out.frame.width, out.frame.height);
  return out;
}

std::vector<PixelRect> sideline_bands(const FieldFrame& frame) {
  std::vector<PixelRect> bands;
  const int markings = frame.depth == ChartDepth::Long ? 8 : 6;
  const double span = frame.width - 1;
  const int left0 = static_cast<int>(std::floor(kSidelineBandInner * span));
  const int left1 = static_cast<int>(std::ceil(kSidelineBandOuter * span));
  const int right0 = static_cast<int>(std::floor((1.0 - kSidelineBandOuter) * span));
  const int right1 = static_cast<int>(std::ceil((1.0 - kSidelineBandInner) * span));
  for (int k = 0; k < markings; ++k) {
    const double yard = 10.0 * k;
    const double top = frame.to_pixel({yard + kSidelineBandHalfYards, 0.0}).y;
    const double bottom = frame.to_pixel({yard - kSidelineBandHalfYards, 0.0}).y;
    const int y0 = std::max(0, static_cast<int>(std::floor(top)));
    const int y1 = std::min(frame.height - 1, static_cast<int>(std::ceil(bottom)));
    bands.push_back({left0, y0, left1, y1});
    bands.push_back({right0, y0, right1, y1});
  }
  return bands;
}

bool is_white(const Rgb& c) noexcept {
  const int lo = std::min({c.r, c.g, c.b});
  const int hi = std::max({c.r, c.g, c.b});
  return lo >= 200 && hi - lo <= 30;
}

RasterImage scrub_sideline_numbers(const RasterImage& image, ChartDepth depth) {
  RasterImage out = image;
  if (image.width() < 2 || image.height() < 2) return out;
  const FieldFrame frame{image.width(), image.height(), depth};
  for (const PixelRect& band : sideline_bands(frame)) {
    std::map<std::uint32_t, int> histogram;
    bool any_white = false;
    for (int y = band.y0; y <= band.y1; ++y) {
      for (int x = band.x0; x <= band.x1; ++x) {
        const Rgb& c = image.at(x, y);
        if (is_white(c)) {
          any_white = true;
        } else {
          ++histogram[(std::uint32_t{c.r} << 16) | (std::uint32_t{c.g} << 8) | c.b];
        }
      }
    }
    if (!any_white || histogram.empty()) continue;
    const auto dominant = std::max_element(
        histogram.begin(), histogram.end(),
        [](const auto& a, const auto& b) { return a.second < b.second; })->first;
    const Rgb grey{static_cast<std::uint8_t>(dominant >> 16),
                   static_cast<std::uint8_t>((dominant >> 8) & 0xFF),
                   static_cast<std::uint8_t>(dominant & 0xFF)};
    for (int y = band.y0; y <= band.y1; ++y) {
      for (int x = band.x0; x <= band.x1; ++x) {
        if (is_white(out.at(x, y))) out.at(x, y) = grey;
      }
    }
  }
  return out;
}

}  // namespace passchart
