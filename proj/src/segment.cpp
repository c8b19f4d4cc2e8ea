#include "passchart/segment.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace passchart {

namespace {

using nlohmann::json;

Hsv hsv_from_json(const json& node) {
  if (!node.is_array() || node.size() != 3) throw Error("HSV triple must have 3 numbers");
  return {node[0].get<double>(), node[1].get<double>(), node[2].get<double>()};
}

Rgb rgb_from_json(const json& node) {
  if (!node.is_array() || node.size() != 3) throw Error("RGB triple must have 3 numbers");
  auto channel = [](const json& v) {
    const int c = v.get<int>();
    if (c < 0 || c > 255) throw Error("RGB channel out of range");
    return static_cast<std::uint8_t>(c);
  };
  return {channel(node[0]), channel(node[1]), channel(node[2])};
}

}  // namespace

Hsv rgb_to_hsv(const Rgb& pixel) noexcept {
  const double r = pixel.r / 255.0;
  const double g = pixel.g / 255.0;
  const double b = pixel.b / 255.0;
  const double hi = std::max({r, g, b});
  const double lo = std::min({r, g, b});
  const double delta = hi - lo;
  Hsv out;
  out.v = hi * 100.0;
  out.s = hi > 0.0 ? delta / hi * 100.0 : 0.0;
  if (delta > 0.0) {
    double h;
    if (hi == r) {
      h = 60.0 * ((g - b) / delta);
    } else if (hi == g) {
      h = 60.0 * ((b - r) / delta) + 120.0;
    } else {
      h = 60.0 * ((r - g) / delta) + 240.0;
    }
    if (h < 0.0) h += 360.0;
    if (h >= 360.0) h -= 360.0;
    out.h = h;
  }
  return out;
}

bool HsvThreshold::contains(const Hsv& c) const noexcept {
  const bool hue_ok = lower.h <= upper.h ? (c.h >= lower.h && c.h <= upper.h)
                                         : (c.h >= lower.h || c.h <= upper.h);
  return hue_ok && c.s >= lower.s && c.s <= upper.s && c.v >= lower.v && c.v <= upper.v;
}

void HsvThreshold::validate() const {
  auto in = [](double v, double lo, double hi) { return v >= lo && v <= hi; };
  for (const Hsv& c : {lower, upper}) {
    if (!in(c.h, 0.0, 360.0) || !in(c.s, 0.0, 100.0) || !in(c.v, 0.0, 100.0)) {
      throw Error("HSV threshold outside H 0-360 / S,V 0-100");
    }
  }
  if (lower.s > upper.s || lower.v > upper.v) {
    throw Error("HSV threshold lower bound exceeds upper bound");
  }
}

PixelMask threshold(const RasterImage& image, const HsvThreshold& t) {
  PixelMask mask(image.width(), image.height());
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      if (t.contains(rgb_to_hsv(image.at(x, y)))) mask.set(x, y);
    }
  }
  return mask;
}

Palette default_palette() {
  Palette p;
  p[PassOutcome::Complete] = {{{80, 40, 40}, {160, 100, 100}}, {40, 200, 90}};
  p[PassOutcome::Incomplete] = {{{0, 0, 85}, {360, 10, 100}}, {230, 230, 230}};
  p[PassOutcome::Touchdown] = {{{220, 40, 40}, {260, 100, 100}}, {60, 90, 230}};
  p[PassOutcome::Interception] = {{{0, 60, 60}, {20, 100, 100}}, {220, 40, 40}};
  p.marker_radius_px = 7.0;
  return p;
}

Palette palette_from_json(const std::string& json_text) {
  Palette palette = default_palette();
  json doc;
  try {
    doc = json::parse(json_text);
    if (!doc.is_object()) throw Error("palette must be a JSON object");
    if (doc.contains("marker_radius")) palette.marker_radius_px = doc.at("marker_radius").get<double>();
    if (doc.contains("outcomes")) {
      for (const auto& [name, node] : doc.at("outcomes").items()) {
        Palette::Entry& entry = palette[parse_outcome(name)];
        if (node.contains("lower")) entry.threshold.lower = hsv_from_json(node.at("lower"));
        if (node.contains("upper")) entry.threshold.upper = hsv_from_json(node.at("upper"));
        if (node.contains("color")) entry.marker = rgb_from_json(node.at("color"));
      }
    }
  } catch (const json::exception& e) {
    throw Error(std::string("invalid palette: ") + e.what());
  }
  if (palette.marker_radius_px <= 0.0) throw Error("palette marker_radius must be positive");
  for (const auto& entry : palette.entries) entry.threshold.validate();
  return palette;
}

Palette load_palette(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read palette " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return palette_from_json(buf.str());
}

std::string palette_to_json(const Palette& palette) {
  json doc;
  doc["marker_radius"] = palette.marker_radius_px;
  for (PassOutcome o : kAllOutcomes) {
    const auto& e = palette[o];
    doc["outcomes"][std::string(to_string(o))] = {
        {"lower", {e.threshold.lower.h, e.threshold.lower.s, e.threshold.lower.v}},
        {"upper", {e.threshold.upper.h, e.threshold.upper.s, e.threshold.upper.v}},
        {"color", {e.marker.r, e.marker.g, e.marker.b}}};
  }
  return doc.dump(2);
}

}  // namespace passchart
