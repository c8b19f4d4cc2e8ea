#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "passchart/cluster.hpp"
#include "passchart/ingest.hpp"
#include "passchart/rectify.hpp"
#include "passchart/segment.hpp"

namespace passchart {

struct ExtractOptions {
  Palette palette = default_palette();
  std::uint64_t seed = kDefaultSeed;
  // Manual field corners (top-left, top-right, bottom-right, bottom-left).
  std::optional<std::array<PixelPoint, 4>> corners;
  std::optional<ChartDepth> depth;
  double touchdown_epsilon = 10.0;
  bool keep_rectified = false;
};

struct ChartExtraction {
  std::vector<PassRecord> records;
  PassCounts counts;
  std::vector<std::string> warnings;
  std::vector<std::string> anomalies;  // outcomes that could not be located
  bool failed = false;                  // nothing could be extracted
  std::optional<RectifiedChart> rectified;
};

/// Seed for one chart, stable across archives and worker scheduling.
std::uint64_t chart_seed(std::uint64_t run_seed, const ChartMetadata& meta);

/// Rectify, scrub, segment and cluster one chart. Outcomes whose markers
/// cannot be located are emitted with missing coordinates and listed in
/// `anomalies`, so the record count always matches the metadata.
ChartExtraction extract_chart(const RasterImage& image, const ChartEntry& entry,
                              const ExtractOptions& options = {});

/// Reads the entry's image and extracts it; image or metadata failures mark
/// the result as failed instead of throwing.
ChartExtraction extract_entry(const ChartEntry& entry, const ExtractOptions& options = {});

}  // namespace passchart
