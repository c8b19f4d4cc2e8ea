#include "passchart/extract.hpp"

#include <algorithm>

#include "passchart/random.hpp"

namespace passchart {

namespace {

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

PassRecord blank_record(const ChartEntry& entry, PassOutcome outcome) {
  PassRecord r;
  r.game_id = entry.meta.game_id;
  r.team = entry.meta.team;
  r.week = entry.meta.week;
  r.name = entry.meta.player_name();
  r.pass_type = outcome;
  r.season_type = entry.meta.season_type;
  r.home_team = entry.home_team;
  r.away_team = entry.away_team;
  r.season = entry.meta.season;
  return r;
}

}  // namespace

std::uint64_t chart_seed(std::uint64_t run_seed, const ChartMetadata& meta) {
  return derive_seed(run_seed, fnv1a(meta.game_id + "|" + meta.player_name()));
}

ChartExtraction extract_chart(const RasterImage& image, const ChartEntry& entry,
                              const ExtractOptions& options) {
  ChartExtraction out;
  out.counts = derive_counts(entry.meta);

  FieldQuad quad;
  if (options.corners) {
    quad.corners = *options.corners;
    quad.depth = infer_depth(quad.corners);
  } else {
    quad = detect_field_quad(image);
  }
  if (options.depth) quad.depth = *options.depth;

  RectifiedChart rect = rectify(image, quad);
  rect.image = scrub_sideline_numbers(rect.image, rect.frame.depth);

  const std::uint64_t seed = chart_seed(options.seed, entry.meta);
  auto outcome_seed = [&](PassOutcome o) {
    return derive_seed(seed, static_cast<std::uint64_t>(o));
  };

  for (PassOutcome outcome : kAllOutcomes) {
    const PixelMask mask = threshold(rect.image, options.palette[outcome].threshold);
    int expected = 0;
    std::vector<PixelPoint> centers;
    try {
      switch (outcome) {
        case PassOutcome::Complete:
          expected = out.counts.completions;
          centers = extract_simple(mask, expected, outcome_seed(outcome));
          break;
        case PassOutcome::Interception:
          expected = out.counts.interceptions;
          centers = extract_simple(mask, expected, outcome_seed(outcome));
          break;
        case PassOutcome::Touchdown: {
          expected = out.counts.touchdowns;
          TouchdownOptions td;
          td.epsilon = options.touchdown_epsilon;
          centers = extract_touchdowns(mask, expected, outcome_seed(outcome), td);
          break;
        }
        case PassOutcome::Incomplete: {
          expected = out.counts.incompletions;
          ReconcileOptions rec;
          rec.marker_radius_px = options.palette.marker_radius_px;
          ReconcileResult r = reconcile_incompletions(mask, expected, outcome_seed(outcome), rec);
          out.counts.incompletions_located = r.adjusted;
          centers = std::move(r.centers);
          break;
        }
      }
    } catch (const ChartAnomalous& e) {
      out.anomalies.push_back(std::string(to_string(outcome)) + ": " + e.what());
      centers.clear();
      if (outcome == PassOutcome::Incomplete) out.counts.incompletions_located = 0;
    }

    std::vector<FieldCoordinate> coords = pixels_to_field(centers, rect.frame, &out.warnings);
    std::sort(coords.begin(), coords.end(), [](const FieldCoordinate& a, const FieldCoordinate& b) {
      return std::pair(a.downfield, a.lateral) < std::pair(b.downfield, b.lateral);
    });
    for (const auto& c : coords) {
      PassRecord r = blank_record(entry, outcome);
      r.coord = c;
      out.records.push_back(std::move(r));
    }
    for (int i = static_cast<int>(coords.size()); i < expected; ++i) {
      out.records.push_back(blank_record(entry, outcome));
    }
  }

  if (options.keep_rectified) out.rectified = std::move(rect);
  return out;
}

ChartExtraction extract_entry(const ChartEntry& entry, const ExtractOptions& options) {
  try {
    return extract_chart(read_png(entry.image_path), entry, options);
  } catch (const Error& e) {
    ChartExtraction failed;
    failed.failed = true;
    failed.anomalies.push_back(e.what());
    return failed;
  }
}

}  // namespace passchart
