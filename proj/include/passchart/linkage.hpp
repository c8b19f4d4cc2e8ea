#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "passchart/core.hpp"

namespace passchart {

/// A completed pass from tracking data, in field-absolute yards: x along the
/// field, y across it from one sideline.
struct TrackedPass {
  std::string game_id;
  std::string passer;
  double snap_x = 0.0;
  double snap_y = 0.0;
  double catch_x = 0.0;
  double catch_y = 0.0;
  bool offense_moves_left = false;  // play_direction == "left"
};

/// Downfield gain from the snap and lateral offset of the catch from the field
/// center, both in the offense's frame.
FieldCoordinate to_los_relative(const TrackedPass& t);

struct TrackedTable {
  std::vector<TrackedPass> passes;
  std::vector<std::string> warnings;  // rows skipped (missing snap, bad numbers)
};

/// Columns game_id, passer, snap_x, snap_y, catch_x, catch_y and optionally
/// play_direction, matched by header name.
TrackedTable read_tracked_passes(std::istream& in);
TrackedTable read_tracked_passes(const std::filesystem::path& path);

struct Link {
  std::size_t chart = 0;    // index into the chart list
  std::size_t tracked = 0;  // index into the tracked list
  double distance = 0.0;
};

struct LinkSet {
  std::vector<Link> links;  // in linking order, distances non-decreasing
  std::vector<std::size_t> unlinked_chart;
  std::vector<std::size_t> unlinked_tracked;
};

/// Repeatedly links the closest unlinked cross pair; ties go to the smaller
/// (chart, tracked) index pair.
LinkSet greedy_link(std::span<const FieldCoordinate> chart, std::span<const FieldCoordinate> tracked);

struct GameLinks {
  std::string game_id;
  std::string passer;
  std::vector<FieldCoordinate> chart;
  std::vector<FieldCoordinate> tracked;
  LinkSet links;
};

struct LinkReport {
  std::vector<GameLinks> games;  // sorted by (game_id, passer)
  std::vector<std::string> warnings;

  std::vector<double> distances() const;
  double median_distance() const;  // NaN when nothing linked
};

/// Links located completions (touchdowns included) of each QB-game to the
/// tracked passes with the same game id and passer name.
LinkReport link_games(std::span<const PassRecord> chart, std::span<const TrackedPass> tracked);

/// One row per link: game_id, passer, chart/tracked coordinates, distance.
void write_link_report(std::ostream& out, const LinkReport& report);
/// One row per QB-game: counts on both sides, links and median distance.
void write_link_summary(std::ostream& out, const LinkReport& report);

double median(std::vector<double> values);

}  // namespace passchart
