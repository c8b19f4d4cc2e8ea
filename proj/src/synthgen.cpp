#include "passchart/synthgen.hpp"

#include <algorithm>
#include <cmath>

namespace passchart {

namespace {

constexpr int kMargin = 40;
constexpr double kTopWidthRatio = 0.83;
constexpr int kScrimmageHalfThickness = 1;
constexpr double kGlyphInner = 0.035;
constexpr double kGlyphOuter = 0.095;
constexpr double kGlyphHalfYards = 1.4;

void fill_rect(RasterImage& img, int x0, int y0, int x1, int y1, Rgb color) {
  x0 = std::max(x0, 0);
  y0 = std::max(y0, 0);
  x1 = std::min(x1, img.width() - 1);
  y1 = std::min(y1, img.height() - 1);
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) img.at(x, y) = color;
  }
}

void fill_disc(RasterImage& img, PixelPoint c, double r, Rgb color) {
  const int x0 = static_cast<int>(std::floor(c.x - r));
  const int x1 = static_cast<int>(std::ceil(c.x + r));
  const int y0 = static_cast<int>(std::floor(c.y - r));
  const int y1 = static_cast<int>(std::ceil(c.y + r));
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      if (!img.contains(x, y)) continue;
      const double dx = x - c.x;
      const double dy = y - c.y;
      if (dx * dx + dy * dy <= r * r) img.at(x, y) = color;
    }
  }
}

// A "10"-style glyph: a bar and a ring, inset inside the sideline band.
void draw_glyph(RasterImage& img, int x0, int y0, int x1, int y1, Rgb color) {
  const int stroke = 2;
  const int split = x0 + (x1 - x0) / 3;
  fill_rect(img, x0, y0, x0 + stroke - 1, y1, color);
  const int rx0 = split + 2;
  fill_rect(img, rx0, y0, x1, y0 + stroke - 1, color);
  fill_rect(img, rx0, y1 - stroke + 1, x1, y1, color);
  fill_rect(img, rx0, y0, rx0 + stroke - 1, y1, color);
  fill_rect(img, x1 - stroke + 1, y0, x1, y1, color);
}

PassOutcome random_outcome(Rng& rng) {
  const double u = rng.uniform();
  if (u < 0.55) return PassOutcome::Complete;
  if (u < 0.83) return PassOutcome::Incomplete;
  if (u < 0.92) return PassOutcome::Touchdown;
  return PassOutcome::Interception;
}

bool outcome_less(const PassRecord& a, const PassRecord& b) {
  auto rank = [](PassOutcome o) {
    for (std::size_t i = 0; i < std::size(kAllOutcomes); ++i) {
      if (kAllOutcomes[i] == o) return i;
    }
    return std::size(kAllOutcomes);
  };
  if (a.pass_type != b.pass_type) return rank(a.pass_type) < rank(b.pass_type);
  if (a.coord.has_value() != b.coord.has_value()) return a.coord.has_value();
  if (!a.coord) return false;
  return std::pair(a.coord->downfield, a.coord->lateral) <
         std::pair(b.coord->downfield, b.coord->lateral);
}

}  // namespace

FieldFrame synth_frame(const SynthSpec& spec) {
  FieldFrame frame;
  frame.depth = spec.depth;
  frame.width = spec.field_width_px;
  frame.height = static_cast<int>(std::lround((spec.field_width_px - 1) * total_yards(spec.depth) /
                                              kFieldWidthYards)) +
                 1;
  return frame;
}

std::array<PixelPoint, 4> default_corners(const SynthSpec& spec) {
  const FieldFrame frame = synth_frame(spec);
  const double bottom = frame.width - 1;
  const double mean_width = 0.5 * (1.0 + kTopWidthRatio) * bottom;
  // Keep the quad's height-to-width ratio equal to the field's so the depth
  // can be read back from the projection.
  const double height = mean_width * total_yards(spec.depth) / kFieldWidthYards;
  const double inset = 0.5 * (1.0 - kTopWidthRatio) * bottom;
  const double m = kMargin;
  return {PixelPoint{m + inset, m}, PixelPoint{m + bottom - inset, m},
          PixelPoint{m + bottom, m + height}, PixelPoint{m, m + height}};
}

std::vector<PixelPoint> trajectory_pixels(const FieldFrame& frame, const FieldCoordinate& target,
                                          double marker_radius_px) {
  const PixelPoint start = frame.to_pixel({0.0, 0.0});
  const PixelPoint end = frame.to_pixel(target);
  const double length = std::hypot(end.x - start.x, end.y - start.y);
  // Stop well short of the marker so the arc never touches it.
  const double stop = marker_radius_px + 14.0;
  std::vector<PixelPoint> out;
  if (length <= stop) return out;
  // Quadratic arc bulging sideways by a fifth of its length.
  const PixelPoint mid{0.5 * (start.x + end.x) - 0.2 * (end.y - start.y),
                       0.5 * (start.y + end.y) + 0.2 * (end.x - start.x)};
  const int steps = static_cast<int>(std::ceil(length * 2.0));
  double travelled = 0.0;
  PixelPoint prev = start;
  for (int i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) / steps;
    const double a = (1 - t) * (1 - t);
    const double b = 2 * (1 - t) * t;
    const double c = t * t;
    const PixelPoint p{a * start.x + b * mid.x + c * end.x, a * start.y + b * mid.y + c * end.y};
    travelled += std::hypot(p.x - prev.x, p.y - prev.y);
    prev = p;
    if (std::hypot(p.x - end.x, p.y - end.y) < stop) break;
    if (std::fmod(travelled, 14.0) < 8.0) out.push_back(p);  // dashes: 8 on, 6 off
  }
  return out;
}

RasterImage render_rectified(const SynthSpec& spec) {
  const FieldFrame frame = synth_frame(spec);
  const SceneColors& col = spec.colors;
  RasterImage canvas(frame.width, frame.height, col.field);
  const double span = frame.width - 1;
  const double r = spec.palette.marker_radius_px;

  fill_rect(canvas, 0, 0, static_cast<int>(std::lround(0.12 * span)), frame.height - 1, col.sideline);
  fill_rect(canvas, static_cast<int>(std::lround(0.88 * span)), 0, frame.width - 1, frame.height - 1,
            col.sideline);
  for (double yard = -kYardsBehindScrimmage + 10.0; yard < yards_beyond_scrimmage(spec.depth);
       yard += 10.0) {
    if (yard == 0.0) continue;
    const int row = static_cast<int>(std::lround(frame.to_pixel({yard, 0.0}).y));
    fill_rect(canvas, 0, row, frame.width - 1, row, col.yard_line);
  }

  if (spec.sideline_numbers) {
    const int markings = spec.depth == ChartDepth::Long ? 8 : 6;
    for (int k = 0; k < markings; ++k) {
      const double yard = 10.0 * k;
      const int y0 = static_cast<int>(std::ceil(frame.to_pixel({yard + kGlyphHalfYards, 0}).y));
      const int y1 = static_cast<int>(std::floor(frame.to_pixel({yard - kGlyphHalfYards, 0}).y));
      const int lx0 = static_cast<int>(std::ceil(kGlyphInner * span));
      const int lx1 = static_cast<int>(std::floor(kGlyphOuter * span));
      draw_glyph(canvas, lx0, y0, lx1, std::min(y1, frame.height - 1), col.glyph);
      const int rx0 = static_cast<int>(std::ceil((1.0 - kGlyphOuter) * span));
      const int rx1 = static_cast<int>(std::floor((1.0 - kGlyphInner) * span));
      draw_glyph(canvas, rx0, y0, rx1, std::min(y1, frame.height - 1), col.glyph);
    }
  }

  if (spec.scrimmage_line) {
    const int row = static_cast<int>(std::lround(frame.to_pixel({0.0, 0.0}).y));
    fill_rect(canvas, 0, row - kScrimmageHalfThickness, frame.width - 1,
              row + kScrimmageHalfThickness, col.scrimmage);
  }

  if (spec.trajectories) {
    const Rgb arc = spec.palette[PassOutcome::Touchdown].marker;
    for (const SynthPass& p : spec.passes) {
      if (p.outcome != PassOutcome::Touchdown) continue;
      for (const PixelPoint& q : trajectory_pixels(frame, p.coord, r)) {
        const int x = static_cast<int>(std::lround(q.x));
        const int y = static_cast<int>(std::lround(q.y));
        fill_rect(canvas, x, y, x + 1, y + 1, arc);
      }
    }
  }

  for (const SynthPass& p : spec.passes) {
    fill_disc(canvas, frame.to_pixel(p.coord), r, spec.palette[p.outcome].marker);
  }
  return canvas;
}

SynthChart render(const SynthSpec& spec, std::uint64_t seed) {
  const FieldFrame frame = synth_frame(spec);
  for (std::size_t i = 0; i < spec.passes.size(); ++i) {
    const FieldCoordinate& c = spec.passes[i].coord;
    if (c.downfield < -kYardsBehindScrimmage || c.downfield > yards_beyond_scrimmage(spec.depth) ||
        std::abs(c.lateral) > kHalfFieldWidthYards) {
      throw Error("synthetic pass outside the declared field");
    }
    for (std::size_t j = 0; j < i; ++j) {
      const PixelPoint a = frame.to_pixel(c);
      const PixelPoint b = frame.to_pixel(spec.passes[j].coord);
      if (std::hypot(a.x - b.x, a.y - b.y) < 1.0) {
        throw Error("synthetic markers coincide and cannot be rendered separately");
      }
    }
  }
  if (spec.phantom_incompletions < 0) throw Error("negative phantom incompletion count");

  SynthChart chart;
  chart.frame = frame;
  chart.corners = spec.corners.value_or(default_corners(spec));
  const RasterImage canvas = render_rectified(spec);

  double max_x = 0.0, max_y = 0.0;
  for (const auto& c : chart.corners) {
    max_x = std::max(max_x, c.x);
    max_y = std::max(max_y, c.y);
  }
  const int width = static_cast<int>(std::ceil(max_x)) + kMargin + 1;
  const int height = static_cast<int>(std::ceil(max_y)) + kMargin + 1;
  const Homography to_image =
      solve_homography(rectangle_corners(frame.width, frame.height), chart.corners);
  chart.image = warp(canvas, to_image, width, height);

  if (spec.noise_sd > 0.0) {
    Rng rng(seed);
    auto jitter = [&](std::uint8_t v) {
      return static_cast<std::uint8_t>(std::clamp(std::lround(v + rng.normal(0.0, spec.noise_sd)), 0L, 255L));
    };
    for (int y = 0; y < chart.image.height(); ++y) {
      for (int x = 0; x < chart.image.width(); ++x) {
        Rgb& px = chart.image.at(x, y);
        px = {jitter(px.r), jitter(px.g), jitter(px.b)};
      }
    }
  }

  ChartMetadata meta = spec.identity;
  int complete = 0, td = 0, interceptions = 0, incomplete = 0;
  for (const SynthPass& p : spec.passes) {
    switch (p.outcome) {
      case PassOutcome::Complete: ++complete; break;
      case PassOutcome::Touchdown: ++td; break;
      case PassOutcome::Interception: ++interceptions; break;
      case PassOutcome::Incomplete: ++incomplete; break;
    }
  }
  incomplete += spec.phantom_incompletions;
  meta.completions = complete + td;
  meta.touchdowns = td;
  meta.interceptions = interceptions;
  meta.attempts = complete + td + interceptions + incomplete;
  chart.meta = meta;

  auto record = [&](PassOutcome o) {
    PassRecord r;
    r.game_id = meta.game_id;
    r.team = meta.team;
    r.week = meta.week;
    r.name = meta.player_name();
    r.pass_type = o;
    r.season_type = meta.season_type;
    r.season = meta.season;
    return r;
  };
  for (const SynthPass& p : spec.passes) {
    PassRecord r = record(p.outcome);
    r.coord = p.coord;
    chart.truth.push_back(std::move(r));
  }
  for (int i = 0; i < spec.phantom_incompletions; ++i) {
    chart.truth.push_back(record(PassOutcome::Incomplete));
  }
  std::stable_sort(chart.truth.begin(), chart.truth.end(), outcome_less);
  return chart;
}

SynthSpec random_spec(Rng& rng, const RandomSpecOptions& options) {
  SynthSpec spec;
  spec.depth = rng.bernoulli(0.5) ? ChartDepth::Short : ChartDepth::Long;
  spec.phantom_incompletions = options.phantom_incompletions;
  spec.scrimmage_line = spec.trajectories = spec.sideline_numbers = options.noise_features;

  const FieldFrame frame = synth_frame(spec);
  auto corners = default_corners(spec);
  const double extent_x = corners[2].x - corners[3].x;
  const double extent_y = corners[3].y - corners[0].y;
  for (auto& c : corners) {
    c.x += rng.uniform(-0.5, 0.5) * options.corner_jitter * extent_x;
    c.y += rng.uniform(-0.5, 0.5) * options.corner_jitter * extent_y;
  }
  // Jitter may push a corner above or left of the margin; shift back in.
  double min_x = corners[0].x, min_y = corners[0].y;
  for (const auto& c : corners) {
    min_x = std::min(min_x, c.x);
    min_y = std::min(min_y, c.y);
  }
  for (auto& c : corners) {
    c.x += kMargin - min_x;
    c.y += kMargin - min_y;
  }
  spec.corners = corners;

  const double r = spec.palette.marker_radius_px;
  const double min_gap = options.min_separation * r;
  const double beyond = yards_beyond_scrimmage(spec.depth);
  const int n = options.min_passes +
                static_cast<int>(rng.index(static_cast<std::uint64_t>(options.max_passes - options.min_passes + 1)));

  std::vector<PixelPoint> placed;
  std::vector<PixelPoint> arcs;
  int attempts = 0;
  while (static_cast<int>(spec.passes.size()) < n && attempts < 20000) {
    ++attempts;
    const PassOutcome outcome = random_outcome(rng);
    // Incompletions stay clear of the sideline-number columns; touchdowns
    // stay clear of the scrimmage line.
    const double lateral_limit = outcome == PassOutcome::Incomplete ? 19.5 : 24.5;
    const double down_lo = outcome == PassOutcome::Touchdown ? 3.0 : -kYardsBehindScrimmage + 1.0;
    FieldCoordinate c{rng.uniform(down_lo, beyond - 1.0), rng.uniform(-lateral_limit, lateral_limit)};
    const PixelPoint px = frame.to_pixel(c);
    bool ok = true;
    for (const auto& q : placed) {
      if (std::hypot(px.x - q.x, px.y - q.y) < min_gap) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    if (outcome == PassOutcome::Touchdown) {
      // Touchdown discs closer than the DBSCAN radius would merge.
      for (const auto& p : spec.passes) {
        if (p.outcome != PassOutcome::Touchdown) continue;
        const PixelPoint tp = frame.to_pixel(p.coord);
        if (std::hypot(px.x - tp.x, px.y - tp.y) < 2.0 * r + 12.0) ok = false;
      }
      if (!ok) continue;
    }
    if (outcome == PassOutcome::Touchdown && spec.trajectories) {
      // Touchdown markers must stay clear of every touchdown arc.
      const auto arc = trajectory_pixels(frame, c, r);
      const double clear = r + 14.0;
      for (const auto& p : spec.passes) {
        if (p.outcome != PassOutcome::Touchdown) continue;
        const PixelPoint tp = frame.to_pixel(p.coord);
        for (const auto& a : arc) {
          if (std::hypot(a.x - tp.x, a.y - tp.y) < clear) ok = false;
        }
      }
      for (const auto& a : arcs) {
        if (std::hypot(a.x - px.x, a.y - px.y) < clear) ok = false;
      }
      if (!ok) continue;
      arcs.insert(arcs.end(), arc.begin(), arc.end());
    }
    placed.push_back(px);
    spec.passes.push_back({c, outcome});
  }
  return spec;
}

}  // namespace passchart
