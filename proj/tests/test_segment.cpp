#include <doctest.h>

#include "passchart/segment.hpp"
#include "passchart/synthgen.hpp"
#include "support.hpp"

using namespace passchart;

TEST_CASE("rgb_to_hsv reference colours") {
  auto check = [](Rgb c, double h, double s, double v) {
    const Hsv x = rgb_to_hsv(c);
    CHECK(x.h == doctest::Approx(h).epsilon(1e-3));
    CHECK(x.s == doctest::Approx(s).epsilon(1e-3));
    CHECK(x.v == doctest::Approx(v).epsilon(1e-3));
  };
  check({255, 0, 0}, 0, 100, 100);
  check({0, 0, 0}, 0, 0, 0);
  check({128, 128, 128}, 0, 0, 50.196);
  check({0, 255, 0}, 120, 100, 100);
  check({0, 0, 255}, 240, 100, 100);
  check({255, 0, 255}, 300, 100, 100);
  check({255, 128, 0}, 30.118, 100, 100);
}

TEST_CASE("hue range wraps through red") {
  HsvThreshold t{{340, 50, 50}, {20, 100, 100}};
  CHECK(t.contains({350, 80, 80}));
  CHECK(t.contains({10, 80, 80}));
  CHECK_FALSE(t.contains({180, 80, 80}));
  CHECK_FALSE(t.contains({10, 20, 80}));
  HsvThreshold bad{{0, 60, 0}, {10, 50, 100}};
  CHECK_THROWS(bad.validate());
}

TEST_CASE("default palette: every marker colour is caught only by its own range") {
  const Palette p = default_palette();
  for (auto o : kAllOutcomes) {
    for (auto q : kAllOutcomes) {
      CHECK(p[q].threshold.contains(rgb_to_hsv(p[o].marker)) == (o == q));
    }
  }
  const SceneColors scene;
  for (Rgb c : {scene.background, scene.field, scene.sideline, scene.yard_line}) {
    for (auto o : kAllOutcomes) CHECK_FALSE(p[o].threshold.contains(rgb_to_hsv(c)));
  }
}

TEST_CASE("threshold on a rendered chart") {
  SynthSpec spec;
  spec.passes = {{{10, 0}, PassOutcome::Complete}, {{20, 10}, PassOutcome::Touchdown}};
  const RasterImage img = render_rectified(spec);
  const FieldFrame frame = synth_frame(spec);

  const PixelMask green = threshold(img, spec.palette[PassOutcome::Complete].threshold);
  PixelMask disc(img.width(), img.height());
  const PixelPoint c = frame.to_pixel({10, 0});
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (img.at(x, y) == spec.palette[PassOutcome::Complete].marker) disc.set(x, y);
    }
  }
  CHECK(green == disc);
  CHECK(testing::dist(disc.points()[0], c) <= spec.palette.marker_radius_px + 1);

  // The scrimmage line shares the touchdown hue and stays in the mask.
  const PixelMask blue = threshold(img, spec.palette[PassOutcome::Touchdown].threshold);
  const PixelPoint los = frame.to_pixel({0, -20});
  CHECK(blue.test(static_cast<int>(std::lround(los.x)), static_cast<int>(std::lround(los.y))));

  CHECK(threshold(RasterImage(30, 30), spec.palette[PassOutcome::Touchdown].threshold).count() == 0);
}

TEST_CASE("palette json round trip and validation") {
  Palette p = default_palette();
  p.marker_radius_px = 9;
  p[PassOutcome::Complete].threshold.lower.h = 85;
  const Palette back = palette_from_json(palette_to_json(p));
  CHECK(back.marker_radius_px == 9);
  CHECK(back[PassOutcome::Complete].threshold.lower.h == 85);
  CHECK(back[PassOutcome::Touchdown].marker == p[PassOutcome::Touchdown].marker);
  CHECK_THROWS(palette_from_json("{\"outcomes\": {\"COMPLETE\": {\"lower\": [1,2]}}}"));
  CHECK_THROWS(palette_from_json("[]"));
}
