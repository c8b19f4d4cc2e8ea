#include <doctest.h>

#include "passchart/rectify.hpp"
#include "passchart/random.hpp"
#include "passchart/synthgen.hpp"
#include "support.hpp"

using namespace passchart;

namespace {

// Heckbert's closed-form projective map from the unit square onto a quad
// (corners in the order (0,0), (1,0), (1,1), (0,1)).
struct SquareToQuad {
  double a, b, c, d, e, f, g, h;

  explicit SquareToQuad(const std::array<PixelPoint, 4>& q) {
    const double dx1 = q[1].x - q[2].x, dx2 = q[3].x - q[2].x, dx3 = q[0].x - q[1].x + q[2].x - q[3].x;
    const double dy1 = q[1].y - q[2].y, dy2 = q[3].y - q[2].y, dy3 = q[0].y - q[1].y + q[2].y - q[3].y;
    const double den = dx1 * dy2 - dx2 * dy1;
    g = (dx3 * dy2 - dx2 * dy3) / den;
    h = (dx1 * dy3 - dx3 * dy1) / den;
    a = q[1].x - q[0].x + g * q[1].x;
    b = q[3].x - q[0].x + h * q[3].x;
    c = q[0].x;
    d = q[1].y - q[0].y + g * q[1].y;
    e = q[3].y - q[0].y + h * q[3].y;
    f = q[0].y;
  }
  PixelPoint operator()(double u, double v) const {
    const double w = g * u + h * v + 1.0;
    return {(a * u + b * v + c) / w, (d * u + e * v + f) / w};
  }
};

const std::array<PixelPoint, 4> kUnit{PixelPoint{0, 0}, {1, 0}, {1, 1}, {0, 1}};

std::array<PixelPoint, 4> random_quad(Rng& rng) {
  return {PixelPoint{rng.uniform(0, 300), rng.uniform(0, 300)},
          {rng.uniform(700, 1000), rng.uniform(0, 300)},
          {rng.uniform(700, 1000), rng.uniform(700, 1000)},
          {rng.uniform(0, 300), rng.uniform(700, 1000)}};
}

}  // namespace

TEST_CASE("homography special cases") {
  const Homography id = solve_homography(kUnit, kUnit);
  const std::array<double, 9> eye{1, 0, 0, 0, 1, 0, 0, 0, 1};
  for (int i = 0; i < 9; ++i) CHECK(id.coefficients()[i] == doctest::Approx(eye[i]).epsilon(1e-12));

  const std::array<PixelPoint, 4> twice{PixelPoint{0, 0}, {2, 0}, {2, 2}, {0, 2}};
  const Homography s = solve_homography(kUnit, twice);
  CHECK(s(0, 0) == doctest::Approx(2));
  CHECK(s(1, 1) == doctest::Approx(2));
  CHECK(s(2, 2) == doctest::Approx(1));
  CHECK(std::abs(s(0, 1)) < 1e-12);
  CHECK(std::abs(s(2, 0)) < 1e-12);

  const std::array<PixelPoint, 4> collinear{PixelPoint{0, 0}, {1, 1}, {2, 2}, {0, 5}};
  CHECK_THROWS_AS(solve_homography(collinear, kUnit), DegenerateQuad);
}

TEST_CASE("homography matches the closed-form square-to-quad map") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto quad = random_quad(rng);
    const SquareToQuad oracle(quad);
    const Homography h = solve_homography(kUnit, quad);
    for (int i = 0; i <= 4; ++i) {
      for (int j = 0; j <= 4; ++j) {
        const double u = i / 4.0, v = j / 4.0;
        CHECK(testing::dist(h.apply({u, v}), oracle(u, v)) < 1e-6);
      }
    }
  }
}

TEST_CASE("homography inverse and corner exactness") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto quad = random_quad(rng);
    const auto rect = rectangle_corners(534, 651);
    const Homography h = solve_homography(quad, rect);
    for (int k = 0; k < 4; ++k) CHECK(testing::dist(h.apply(quad[static_cast<std::size_t>(k)]), rect[static_cast<std::size_t>(k)]) < 1e-6);
    const Homography inv = h.inverse();
    const PixelPoint p{rng.uniform(300, 700), rng.uniform(300, 700)};
    CHECK(testing::dist(inv.apply(h.apply(p)), p) < 1e-6);
  }
  CHECK_THROWS_AS(Homography({1, 2, 3, 2, 4, 6, 0, 0, 1}).inverse(), DegenerateQuad);
}

TEST_CASE("warp: identity copies, outside samples are black") {
  RasterImage img(6, 5);
  for (int y = 0; y < 5; ++y) {
    for (int x = 0; x < 6; ++x) img.at(x, y) = {static_cast<std::uint8_t>(x * 40), static_cast<std::uint8_t>(y * 50), 7};
  }
  CHECK(warp(img, Homography(), 6, 5) == img);
  const RasterImage shifted = warp(img, Homography({1, 0, 3, 0, 1, 0, 0, 0, 1}), 6, 5);
  CHECK(shifted.at(0, 0) == Rgb{0, 0, 0});
  CHECK(shifted.at(3, 2) == img.at(0, 2));
}

TEST_CASE("frame mapping conventions") {
  FieldFrame f{534, 651, ChartDepth::Short};
  const PixelPoint los = f.to_pixel({0, 0});
  CHECK(los.x == doctest::Approx(266.5));
  CHECK(los.y == doctest::Approx(650.0 * 55.0 / 65.0));
  const FieldCoordinate left = f.to_field({0, los.y});
  CHECK(left.downfield == doctest::Approx(0).epsilon(1e-9));
  CHECK(left.lateral == doctest::Approx(-kHalfFieldWidthYards));
  CHECK(f.to_field({533, los.y}).lateral == doctest::Approx(kHalfFieldWidthYards));
  CHECK(f.to_field({0, 0}).downfield == doctest::Approx(55));
  CHECK(f.to_field({0, 650}).downfield == doctest::Approx(-10));
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    const FieldCoordinate c{rng.uniform(-10, 55), rng.uniform(-26, 26)};
    CHECK(testing::dist(f.to_field(f.to_pixel(c)), c) < 1e-9);
  }
  CHECK(chart_depth_from_yards(85) == ChartDepth::Long);
  CHECK_THROWS(chart_depth_from_yards(70));
}

TEST_CASE("field detection on rendered charts") {
  CHECK_THROWS_AS(detect_field_quad(RasterImage(200, 200)), FieldNotFound);

  Rng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    // Corners are jittered for the drawn depth, so redraw until it matches.
    const ChartDepth want = trial % 2 ? ChartDepth::Long : ChartDepth::Short;
    SynthSpec spec = random_spec(rng);
    while (spec.depth != want) spec = random_spec(rng);
    spec.passes.clear();
    const SynthChart chart = render(spec, 1);
    const FieldQuad quad = detect_field_quad(chart.image);
    CHECK(quad.depth == spec.depth);
    for (int k = 0; k < 4; ++k) {
      CHECK(testing::dist(quad.corners[static_cast<std::size_t>(k)], chart.corners[static_cast<std::size_t>(k)]) < 2.0);
    }
  }
}

TEST_CASE("marker lands at its predicted rectified pixel") {
  SynthSpec spec;
  spec.scrimmage_line = false;
  spec.sideline_numbers = false;
  spec.passes = {{{12.0, -7.5}, PassOutcome::Complete}, {{40.0, 15.0}, PassOutcome::Interception}};
  const SynthChart chart = render(spec, 1);
  const RectifiedChart rect = rectify(chart.image, detect_field_quad(chart.image));
  const Rgb colors[] = {spec.palette[PassOutcome::Complete].marker,
                        spec.palette[PassOutcome::Interception].marker};
  for (int k = 0; k < 2; ++k) {
    double sx = 0, sy = 0, n = 0;
    for (int y = 0; y < rect.image.height(); ++y) {
      for (int x = 0; x < rect.image.width(); ++x) {
        if (rect.image.at(x, y) == colors[k]) {
          sx += x;
          sy += y;
          ++n;
        }
      }
    }
    REQUIRE(n > 100);
    const PixelPoint expected = rect.frame.to_pixel(spec.passes[static_cast<std::size_t>(k)].coord);
    CHECK(testing::dist({sx / n, sy / n}, expected) < 1.0);
  }
}

TEST_CASE("sideline scrubbing") {
  CHECK(sideline_bands({534, 651, ChartDepth::Short}).size() == 12);
  CHECK(sideline_bands({534, 851, ChartDepth::Long}).size() == 16);

  for (ChartDepth depth : {ChartDepth::Short, ChartDepth::Long}) {
    SynthSpec spec;
    spec.depth = depth;
    spec.passes = {{{20.0, 0.0}, PassOutcome::Incomplete}};
    const RasterImage img = render_rectified(spec);
    const FieldFrame frame = synth_frame(spec);
    REQUIRE(img.width() == frame.width);
    const auto bands = sideline_bands(frame);
    auto white_in_bands = [&](const RasterImage& im) {
      int n = 0;
      for (const auto& b : bands) {
        for (int y = b.y0; y <= b.y1; ++y) {
          for (int x = b.x0; x <= b.x1; ++x) n += im.contains(x, y) && is_white(im.at(x, y));
        }
      }
      return n;
    };
    CHECK(white_in_bands(img) > 0);
    const RasterImage clean = scrub_sideline_numbers(img, depth);
    CHECK(white_in_bands(clean) == 0);
    // The midfield marker and everything else outside the bands are untouched.
    int changed_outside = 0;
    for (int y = 0; y < img.height(); ++y) {
      for (int x = 0; x < img.width(); ++x) {
        bool inside = false;
        for (const auto& b : bands) inside = inside || b.contains(x, y);
        if (!inside && !(img.at(x, y) == clean.at(x, y))) ++changed_outside;
      }
    }
    CHECK(changed_outside == 0);
    const PixelPoint m = frame.to_pixel({20.0, 0.0});
    CHECK(clean.at(static_cast<int>(m.x), static_cast<int>(m.y)) == spec.palette[PassOutcome::Incomplete].marker);
  }

  RasterImage dark(50, 80, {50, 50, 50});
  CHECK(scrub_sideline_numbers(dark, ChartDepth::Short) == dark);
}
