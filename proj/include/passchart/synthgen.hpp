#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "passchart/random.hpp"
#include "passchart/rectify.hpp"
#include "passchart/segment.hpp"

namespace passchart {

struct SynthPass {
  FieldCoordinate coord;
  PassOutcome outcome = PassOutcome::Complete;
};

/// Scene colours that are not pass markers.
struct SceneColors {
  Rgb background{0, 0, 0};
  Rgb field{50, 50, 50};
  Rgb sideline{72, 72, 72};
  Rgb yard_line{90, 90, 90};
  Rgb glyph{255, 255, 255};
  Rgb scrimmage{40, 80, 220};
};

struct SynthSpec {
  std::vector<SynthPass> passes;
  ChartDepth depth = ChartDepth::Short;
  int field_width_px = 534;  // width of the rectified field, sideline to sideline
  // Field trapezoid in the output image; the default mimics the published
  // charts (top edge about 83% of the bottom edge).
  std::optional<std::array<PixelPoint, 4>> corners;
  Palette palette = default_palette();
  SceneColors colors;
  int phantom_incompletions = 0;  // declared in metadata but not drawn
  bool scrimmage_line = true;
  bool trajectories = true;
  bool sideline_numbers = true;
  double noise_sd = 0.0;  // per-channel Gaussian noise
  ChartMetadata identity;  // names, ids and season copied into the metadata
};

struct SynthChart {
  RasterImage image;
  ChartMetadata meta;
  std::vector<PassRecord> truth;  // drawn passes plus phantom incompletions (no coordinate)
  std::array<PixelPoint, 4> corners;
  FieldFrame frame;
};

/// Rectified frame for a spec (before projection into the trapezoid).
FieldFrame synth_frame(const SynthSpec& spec);
std::array<PixelPoint, 4> default_corners(const SynthSpec& spec);

/// Pixels of the dashed touchdown trajectory toward `target`, in rectified coordinates.
std::vector<PixelPoint> trajectory_pixels(const FieldFrame& frame, const FieldCoordinate& target,
                                          double marker_radius_px);

/// Draws the bird's-eye chart and projects it into the trapezoid. `seed` only
/// drives the optional pixel noise. Throws Error when two markers coincide or
/// a pass lies outside the field.
SynthChart render(const SynthSpec& spec, std::uint64_t seed);

/// The bird's-eye chart before projection.
RasterImage render_rectified(const SynthSpec& spec);

struct RandomSpecOptions {
  int min_passes = 3;
  int max_passes = 45;
  double corner_jitter = 0.05;    // total spread as a fraction of the quad extent
  double min_separation = 3.0;    // marker radii between marker centers
  int phantom_incompletions = 0;
  bool noise_features = true;      // scrimmage line, trajectories, sideline numbers
};

/// Random well-separated chart with mixed outcomes.
SynthSpec random_spec(Rng& rng, const RandomSpecOptions& options = {});

}  // namespace passchart
