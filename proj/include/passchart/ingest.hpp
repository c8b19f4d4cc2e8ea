#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "passchart/core.hpp"

namespace passchart {

struct ChartEntry {
  ChartMetadata meta;
  std::filesystem::path image_path;
  std::filesystem::path metadata_path;
  std::optional<std::string> home_team;
  std::optional<std::string> away_team;
};

struct SeasonCoverage {
  int charts = 0;
  int games = 0;
};

struct ChartArchive {
  std::vector<ChartEntry> entries;        // sorted by (season, week, game_id)
  std::map<int, SeasonCoverage> coverage;  // keyed by season
  std::vector<std::string> warnings;
};

/// Parses one metadata document. Accepts the published field names either at
/// the top level or inside first-level nested objects; every object carrying
/// the fields yields one chart.
std::vector<ChartMetadata> parse_chart_metadata(const std::string& json_text);

/// Flat metadata document readable by parse_chart_metadata.
std::string chart_metadata_json(const ChartMetadata& meta);

/// Indexes every *.json under `root` (recursively). Entries whose image is
/// missing or not a readable PNG are skipped with a warning.
ChartArchive load_archive(const std::filesystem::path& root);

/// Adds home/away teams from a CSV with game_id, home_team and away_team
/// columns (extra columns ignored, malformed rows skipped with a warning).
ChartArchive join_games(ChartArchive archive, const std::filesystem::path& games_csv);

}  // namespace passchart
