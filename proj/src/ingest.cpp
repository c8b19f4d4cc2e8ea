#include "passchart/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "passchart/csv.hpp"
#include "passchart/image.hpp"

namespace passchart {

namespace {

using nlohmann::json;

bool looks_like_chart(const json& node) {
  return node.is_object() && node.contains("attempts") && node.contains("completions");
}

int count_field(const json& node, const char* key) {
  if (!node.contains(key)) throw Error(std::string("missing field '") + key + "'");
  const json& v = node.at(key);
  if (v.is_number_integer()) return v.get<int>();
  if (v.is_number()) return static_cast<int>(v.get<double>());
  if (v.is_string()) {
    const auto& s = v.get_ref<const std::string&>();
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec == std::errc() && ptr == s.data() + s.size()) return value;
  }
  throw Error(std::string("field '") + key + "' is not a count");
}

std::string text_field(const json& node, const char* key) {
  if (!node.contains(key) || node.at(key).is_null()) return {};
  const json& v = node.at(key);
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  return v.dump();
}

ChartMetadata to_metadata(const json& node) {
  ChartMetadata meta;
  meta.completions = count_field(node, "completions");
  meta.touchdowns = count_field(node, "touchdowns");
  meta.attempts = count_field(node, "attempts");
  meta.interceptions = count_field(node, "interceptions");
  meta.image_ref = text_field(node, "extraLargeImg");
  meta.week = text_field(node, "week");
  meta.game_id = text_field(node, "gameId");
  meta.season = node.contains("season") ? count_field(node, "season") : 0;
  meta.first_name = text_field(node, "firstName");
  meta.last_name = text_field(node, "lastName");
  meta.team = text_field(node, "team");
  meta.position = text_field(node, "position");
  const std::string season_type = text_field(node, "seasonType");
  meta.season_type = season_type.empty() ? SeasonType::Regular : parse_season_type(season_type);
  return meta;
}

std::filesystem::path resolve_image(const std::string& ref, const std::filesystem::path& dir) {
  if (ref.empty()) return {};
  std::string local = ref;
  if (ref.find("://") != std::string::npos) {
    // Remote reference: look for the downloaded file next to the metadata.
    const auto query = local.find_first_of("?#");
    if (query != std::string::npos) local.erase(query);
    local = local.substr(local.find_last_of('/') + 1);
  }
  std::filesystem::path path(local);
  return path.is_absolute() ? path : dir / path;
}

// Numeric weeks sort numerically and before named playoff weeks.
std::tuple<int, long, std::string> week_key(const std::string& week) {
  long value = 0;
  auto [ptr, ec] = std::from_chars(week.data(), week.data() + week.size(), value);
  if (ec == std::errc() && ptr == week.data() + week.size()) return {0, value, {}};
  return {1, 0, week};
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

std::vector<ChartMetadata> parse_chart_metadata(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(std::string("invalid JSON: ") + e.what());
  }
  std::vector<ChartMetadata> out;
  if (looks_like_chart(doc)) {
    out.push_back(to_metadata(doc));
    return out;
  }
  if (doc.is_object()) {
    for (const auto& [key, value] : doc.items()) {
      if (looks_like_chart(value)) out.push_back(to_metadata(value));
    }
  }
  if (out.empty()) throw Error("no chart metadata object found");
  return out;
}

std::string chart_metadata_json(const ChartMetadata& meta) {
  json doc = {{"completions", meta.completions},
              {"touchdowns", meta.touchdowns},
              {"attempts", meta.attempts},
              {"interceptions", meta.interceptions},
              {"extraLargeImg", meta.image_ref},
              {"week", meta.week},
              {"gameId", meta.game_id},
              {"season", meta.season},
              {"firstName", meta.first_name},
              {"lastName", meta.last_name},
              {"team", meta.team},
              {"position", meta.position},
              {"seasonType", std::string(to_string(meta.season_type))}};
  return doc.dump(2) + "\n";
}

ChartArchive load_archive(const std::filesystem::path& root) {
  ChartArchive archive;
  if (!std::filesystem::is_directory(root)) {
    throw Error("input directory does not exist: " + root.string());
  }
  std::vector<std::filesystem::path> json_files;
  for (const auto& item : std::filesystem::recursive_directory_iterator(root)) {
    if (item.is_regular_file() && item.path().extension() == ".json") {
      json_files.push_back(item.path());
    }
  }
  std::sort(json_files.begin(), json_files.end());

  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& path : json_files) {
    std::vector<ChartMetadata> charts;
    try {
      charts = parse_chart_metadata(read_file(path));
    } catch (const Error& e) {
      archive.warnings.push_back(path.string() + ": " + e.what());
      continue;
    }
    for (ChartMetadata& meta : charts) {
      const auto image = resolve_image(meta.image_ref, path.parent_path());
      if (image.empty() || !std::filesystem::exists(image)) {
        archive.warnings.push_back(path.string() + ": image not found '" + meta.image_ref + "'");
        continue;
      }
      if (!probe_png(image)) {
        archive.warnings.push_back(path.string() + ": image does not decode '" +
                                   image.string() + "'");
        continue;
      }
      if (!seen.emplace(meta.game_id, meta.player_name()).second) {
        archive.warnings.push_back(path.string() + ": duplicate chart for game " + meta.game_id +
                                   " player " + meta.player_name());
        continue;
      }
      archive.entries.push_back(ChartEntry{std::move(meta), image, path, {}, {}});
    }
  }

  std::stable_sort(archive.entries.begin(), archive.entries.end(),
                   [](const ChartEntry& a, const ChartEntry& b) {
                     return std::tuple(a.meta.season, week_key(a.meta.week), a.meta.game_id,
                                       a.meta.player_name()) <
                            std::tuple(b.meta.season, week_key(b.meta.week), b.meta.game_id,
                                       b.meta.player_name());
                   });

  std::map<int, std::set<std::string>> games;
  for (const auto& entry : archive.entries) {
    ++archive.coverage[entry.meta.season].charts;
    games[entry.meta.season].insert(entry.meta.game_id);
  }
  for (auto& [season, cov] : archive.coverage) cov.games = static_cast<int>(games[season].size());
  return archive;
}

ChartArchive join_games(ChartArchive archive, const std::filesystem::path& games_csv) {
  std::ifstream in(games_csv, std::ios::binary);
  if (!in) throw Error("cannot read " + games_csv.string());
  CsvReader reader(in);
  CsvRow header;
  if (!reader.next(header)) return archive;

  auto column = [&](std::string_view name) -> std::ptrdiff_t {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw Error(games_csv.string() + ": missing column '" +
                                        std::string(name) + "'");
    return it - header.begin();
  };
  const auto game_col = static_cast<std::size_t>(column("game_id"));
  const auto home_col = static_cast<std::size_t>(column("home_team"));
  const auto away_col = static_cast<std::size_t>(column("away_team"));
  const std::size_t needed = std::max({game_col, home_col, away_col}) + 1;

  std::map<std::string, std::pair<std::string, std::string>> teams;
  CsvRow row;
  while (reader.next(row)) {
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() < needed || row[game_col].empty() || row[home_col].empty() ||
        row[away_col].empty()) {
      archive.warnings.push_back(games_csv.string() + ": malformed row at line " +
                                 std::to_string(reader.line()));
      continue;
    }
    teams.emplace(row[game_col], std::pair{row[home_col], row[away_col]});
  }
  for (ChartEntry& entry : archive.entries) {
    auto it = teams.find(entry.meta.game_id);
    if (it == teams.end()) continue;
    entry.home_team = it->second.first;
    entry.away_team = it->second.second;
  }
  return archive;
}

}  // namespace passchart
