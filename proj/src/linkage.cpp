#include "passchart/linkage.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <tuple>

#include "passchart/csv.hpp"

namespace passchart {

namespace {

std::optional<double> parse_double(const std::string& s) {
  if (s.empty() || s == "NA") return std::nullopt;
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace

FieldCoordinate to_los_relative(const TrackedPass& t) {
  const double sign = t.offense_moves_left ? -1.0 : 1.0;
  return {sign * (t.catch_x - t.snap_x), sign * (t.catch_y - kHalfFieldWidthYards)};
}

TrackedTable read_tracked_passes(std::istream& in) {
  TrackedTable out;
  CsvReader reader(in);
  CsvRow header;
  if (!reader.next(header)) return out;
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const char* name : {"game_id", "passer", "snap_x", "snap_y", "catch_x", "catch_y"}) {
    if (!col.count(name)) throw Error(std::string("tracking CSV lacks column ") + name);
  }
  const auto dir = col.find("play_direction");
  CsvRow row;
  while (reader.next(row)) {
    if (row.size() == 1 && row[0].empty()) continue;
    const std::string where = "tracking line " + std::to_string(reader.line());
    if (row.size() != header.size()) {
      out.warnings.push_back(where + ": wrong field count, skipped");
      continue;
    }
    const auto sx = parse_double(row[col["snap_x"]]);
    const auto sy = parse_double(row[col["snap_y"]]);
    const auto cx = parse_double(row[col["catch_x"]]);
    const auto cy = parse_double(row[col["catch_y"]]);
    if (!sx || !sy) {
      out.warnings.push_back(where + ": missing snap location, skipped");
      continue;
    }
    if (!cx || !cy) {
      out.warnings.push_back(where + ": missing catch location, skipped");
      continue;
    }
    TrackedPass t{row[col["game_id"]], row[col["passer"]], *sx, *sy, *cx, *cy, false};
    if (dir != col.end()) t.offense_moves_left = row[dir->second] == "left";
    out.passes.push_back(std::move(t));
  }
  return out;
}

TrackedTable read_tracked_passes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  return read_tracked_passes(in);
}

LinkSet greedy_link(std::span<const FieldCoordinate> chart, std::span<const FieldCoordinate> tracked) {
  // Sorting every pair once is equivalent to repeatedly taking the global
  // minimum among unlinked points.
  std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
  pairs.reserve(chart.size() * tracked.size());
  for (std::size_t i = 0; i < chart.size(); ++i) {
    for (std::size_t j = 0; j < tracked.size(); ++j) {
      pairs.emplace_back(std::hypot(chart[i].downfield - tracked[j].downfield,
                                    chart[i].lateral - tracked[j].lateral),
                         i, j);
    }
  }
  std::sort(pairs.begin(), pairs.end());
  std::vector<bool> used_c(chart.size()), used_t(tracked.size());
  LinkSet out;
  const std::size_t target = std::min(chart.size(), tracked.size());
  for (const auto& [d, i, j] : pairs) {
    if (out.links.size() == target) break;
    if (used_c[i] || used_t[j]) continue;
    used_c[i] = used_t[j] = true;
    out.links.push_back({i, j, d});
  }
  for (std::size_t i = 0; i < chart.size(); ++i) {
    if (!used_c[i]) out.unlinked_chart.push_back(i);
  }
  for (std::size_t j = 0; j < tracked.size(); ++j) {
    if (!used_t[j]) out.unlinked_tracked.push_back(j);
  }
  return out;
}

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::vector<double> LinkReport::distances() const {
  std::vector<double> out;
  for (const auto& g : games) {
    for (const auto& l : g.links.links) out.push_back(l.distance);
  }
  return out;
}

double LinkReport::median_distance() const { return median(distances()); }

LinkReport link_games(std::span<const PassRecord> chart, std::span<const TrackedPass> tracked) {
  std::map<std::pair<std::string, std::string>, GameLinks> games;
  for (const auto& r : chart) {
    if (!is_completion(r.pass_type) || !r.coord) continue;
    auto& g = games[{r.game_id, r.name}];
    g.chart.push_back(*r.coord);
  }
  for (const auto& t : tracked) {
    auto& g = games[{t.game_id, t.passer}];
    g.tracked.push_back(to_los_relative(t));
  }
  LinkReport report;
  for (auto& [key, g] : games) {
    g.game_id = key.first;
    g.passer = key.second;
    if (g.chart.empty()) {
      report.warnings.push_back(g.game_id + " " + g.passer + ": no chart completions");
    } else if (g.tracked.empty()) {
      report.warnings.push_back(g.game_id + " " + g.passer + ": no tracked passes");
    }
    g.links = greedy_link(g.chart, g.tracked);
    report.games.push_back(std::move(g));
  }
  return report;
}

void write_link_report(std::ostream& out, const LinkReport& report) {
  write_csv_row(out, {"game_id", "passer", "chart_x", "chart_y", "tracked_x", "tracked_y", "distance"});
  for (const auto& g : report.games) {
    for (const auto& l : g.links.links) {
      const auto& c = g.chart[l.chart];
      const auto& t = g.tracked[l.tracked];
      write_csv_row(out, {g.game_id, g.passer, format_number(c.lateral), format_number(c.downfield),
                          format_number(t.lateral), format_number(t.downfield),
                          format_number(l.distance)});
    }
  }
}

void write_link_summary(std::ostream& out, const LinkReport& report) {
  write_csv_row(out, {"game_id", "passer", "chart_passes", "tracked_passes", "linked",
                      "median_distance"});
  for (const auto& g : report.games) {
    std::vector<double> d;
    for (const auto& l : g.links.links) d.push_back(l.distance);
    const double m = median(d);
    write_csv_row(out, {g.game_id, g.passer, std::to_string(g.chart.size()),
                        std::to_string(g.tracked.size()), std::to_string(g.links.links.size()),
                        std::isnan(m) ? "NA" : format_number(m)});
  }
  const double all = report.median_distance();
  write_csv_row(out, {"ALL", "", "", "", std::to_string(report.distances().size()),
                      std::isnan(all) ? "NA" : format_number(all)});
}

}  // namespace passchart
