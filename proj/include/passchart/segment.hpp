#pragma once

#include <array>
#include <filesystem>
#include <string>

#include "passchart/image.hpp"

namespace passchart {

/// Hue in degrees [0, 360); saturation and value in percent [0, 100].
struct Hsv {
  double h = 0.0;
  double s = 0.0;
  double v = 0.0;
};

Hsv rgb_to_hsv(const Rgb& pixel) noexcept;

/// Inclusive HSV box. When lower.h > upper.h the hue range wraps through 0.
struct HsvThreshold {
  Hsv lower;
  Hsv upper;

  bool contains(const Hsv& c) const noexcept;
  void validate() const;
};

PixelMask threshold(const RasterImage& image, const HsvThreshold& t);

/// Segmentation thresholds and the marker colours the charts are drawn with.
struct Palette {
  struct Entry {
    HsvThreshold threshold;
    Rgb marker;
  };
  std::array<Entry, 4> entries;  // indexed by PassOutcome
  double marker_radius_px = 7.0;

  const Entry& operator[](PassOutcome o) const { return entries[static_cast<std::size_t>(o)]; }
  Entry& operator[](PassOutcome o) { return entries[static_cast<std::size_t>(o)]; }
};

Palette default_palette();

/// Palette JSON: {"marker_radius": r, "outcomes": {"COMPLETE": {"lower": [h,s,v],
/// "upper": [h,s,v], "color": [r,g,b]}, ...}}. Missing outcomes or fields keep
/// their defaults.
Palette palette_from_json(const std::string& json_text);
Palette load_palette(const std::filesystem::path& path);
std::string palette_to_json(const Palette& palette);

}  // namespace passchart
