#include "passchart/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <set>

#include "passchart/csv.hpp"
#include "passchart/linkage.hpp"
#include "passchart/parallel.hpp"

namespace passchart {

namespace {

struct GroupData {
  std::string name;
  std::vector<LabeledPass> labeled;
  std::vector<FieldCoordinate> coords;
};

std::vector<LabeledPass> labeled_passes(std::span<const PassRecord> records, int season,
                                        const GridGeometry& g,
                                        std::map<std::string, GroupData>* groups, GroupBy by) {
  std::vector<LabeledPass> out;
  for (const auto& r : records) {
    if (r.season != season || !r.coord || !g.contains(*r.coord)) continue;
    const LabeledPass p{*r.coord, is_completion(r.pass_type)};
    out.push_back(p);
    if (!groups) continue;
    if (const auto key = group_key(r, by)) {
      auto& gd = (*groups)[*key];
      gd.name = *key;
      gd.labeled.push_back(p);
      gd.coords.push_back(p.coord);
    }
  }
  return out;
}

std::optional<double> number_or_na(const std::string& s) {
  if (s.empty() || s == "NA") return std::nullopt;
  return std::stod(s);
}

}  // namespace

GroupBy parse_group_by(std::string_view text) {
  if (text == "qb") return GroupBy::Qb;
  if (text == "defense") return GroupBy::Defense;
  if (text == "league") return GroupBy::League;
  throw Error("unknown grouping '" + std::string(text) + "' (expected qb, defense or league)");
}

std::string_view to_string(GroupBy g) noexcept {
  switch (g) {
    case GroupBy::Qb: return "qb";
    case GroupBy::Defense: return "defense";
    case GroupBy::League: return "league";
  }
  return "qb";
}

std::optional<std::string> group_key(const PassRecord& r, GroupBy by) {
  switch (by) {
    case GroupBy::Qb:
      return r.name;
    case GroupBy::League:
      return std::string("NFL");
    case GroupBy::Defense:
      if (!r.home_team || !r.away_team) return std::nullopt;
      if (r.team == *r.home_team) return *r.away_team;
      if (r.team == *r.away_team) return *r.home_team;
      return std::nullopt;
  }
  return std::nullopt;
}

std::vector<int> seasons_in(std::span<const PassRecord> records) {
  std::set<int> s;
  for (const auto& r : records) {
    if (r.coord) s.insert(r.season);
  }
  return {s.begin(), s.end()};
}

SeasonAnalysis analyze_season(std::span<const PassRecord> records, int season,
                              const AnalysisOptions& options) {
  SeasonAnalysis out;
  out.season = season;
  std::map<std::string, GroupData> groups;
  const auto league = labeled_passes(records, season, options.geometry, &groups, options.group_by);
  out.n_passes = static_cast<int>(league.size());
  std::vector<FieldCoordinate> league_coords;
  for (const auto& p : league) league_coords.push_back(p.coord);
  out.league_density = kde2d(league_coords, options.geometry);
  out.league_surface = predict_surface(fit_gam(league, options.gam), options.geometry);

  if (options.prior_weight) {
    out.prior_weight = *options.prior_weight;
  } else {
    std::vector<double> sizes;
    for (const auto& [name, g] : groups) sizes.push_back(static_cast<double>(g.labeled.size()));
    out.prior_weight = sizes.empty() ? 1.0 : median(sizes);
  }

  std::vector<const GroupData*> eligible;
  for (const auto& [name, g] : groups) {
    if (static_cast<int>(g.labeled.size()) >= options.min_passes) {
      eligible.push_back(&g);
    } else {
      out.warnings.push_back(std::to_string(season) + " " + name + ": " +
                             std::to_string(g.labeled.size()) + " passes, below the minimum");
    }
  }

  std::vector<std::optional<GroupAnalysis>> fitted(eligible.size());
  std::vector<std::string> errors(eligible.size());
  parallel_for(eligible.size(), options.jobs, [&](std::size_t i) {
    const GroupData& g = *eligible[i];
    try {
      GroupAnalysis a;
      a.group = g.name;
      a.season = season;
      a.n_passes = static_cast<int>(g.labeled.size());
      a.passes = g.coords;
      a.density = kde2d(g.coords, options.geometry);
      a.surface = predict_surface(fit_gam(g.labeled, options.gam), options.geometry);
      ShrinkageInputs in{&a.density, &out.league_density, &a.surface, &out.league_surface,
                         static_cast<double>(a.n_passes), out.prior_weight};
      a.shrunk = naive_bayes_surface(in);
      a.difference = SurfaceGrid(options.geometry);
      for (std::size_t k = 0; k < a.difference.values().size(); ++k) {
        a.difference.values()[k] = a.shrunk.values()[k] - out.league_surface.values()[k];
      }
      a.cpae = cpae(a.shrunk, out.league_surface, a.density);
      fitted[i] = std::move(a);
    } catch (const Error& e) {
      errors[i] = std::to_string(season) + " " + g.name + ": " + e.what();
    }
  });
  for (std::size_t i = 0; i < fitted.size(); ++i) {
    if (fitted[i]) {
      out.groups.push_back(std::move(*fitted[i]));
    } else {
      out.warnings.push_back(errors[i]);
    }
  }
  return out;
}

std::vector<CpaeResult> cpae_results(std::span<const SeasonAnalysis> seasons) {
  std::vector<CpaeResult> out;
  for (const auto& s : seasons) {
    for (const auto& g : s.groups) out.push_back({g.group, g.season, g.n_passes, g.cpae});
  }
  return out;
}

void write_cpae_table(std::ostream& out, std::span<const CpaeResult> results, GroupBy by) {
  std::set<int> seasons;
  std::map<std::string, std::map<int, const CpaeResult*>> rows;
  for (const auto& r : results) {
    seasons.insert(r.season);
    rows[r.group][r.season] = &r;
  }
  CsvRow header{by == GroupBy::Qb ? "QB" : "Team"};
  for (int s : seasons) {
    const int yy = ((s % 100) + 100) % 100;
    header.push_back((yy < 10 ? "CPAE0" : "CPAE") + std::to_string(yy));
    header.push_back("npasses_" + std::to_string(s));
  }
  write_csv_row(out, header);

  std::vector<std::string> order;
  for (const auto& [g, _] : rows) order.push_back(g);
  const int last = seasons.empty() ? 0 : *seasons.rbegin();
  std::stable_sort(order.begin(), order.end(), [&](const std::string& a, const std::string& b) {
    const auto ia = rows[a].find(last);
    const auto ib = rows[b].find(last);
    const bool ha = ia != rows[a].end();
    const bool hb = ib != rows[b].end();
    if (ha != hb) return ha;
    if (!ha) return false;
    return ia->second->cpae > ib->second->cpae;
  });
  for (const auto& g : order) {
    CsvRow row{g};
    for (int s : seasons) {
      const auto it = rows[g].find(s);
      if (it == rows[g].end()) {
        row.push_back("");
        row.push_back("");
      } else {
        row.push_back(format_number(it->second->cpae));
        row.push_back(std::to_string(it->second->n_passes));
      }
    }
    write_csv_row(out, row);
  }
}

std::vector<CpaeResult> read_cpae_table(std::istream& in) {
  CsvReader reader(in);
  CsvRow header;
  if (!reader.next(header)) return {};
  if (header.size() < 3 || (header.size() - 1) % 2 != 0) throw Error("malformed CPAE table header");
  std::vector<int> seasons;
  for (std::size_t c = 2; c < header.size(); c += 2) {
    const std::string& h = header[c];
    if (h.rfind("npasses_", 0) != 0) throw Error("malformed CPAE table column " + h);
    seasons.push_back(std::stoi(h.substr(8)));
  }
  std::vector<CpaeResult> out;
  CsvRow row;
  while (reader.next(row)) {
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() != header.size()) throw Error("ragged CPAE table row " + std::to_string(reader.line()));
    for (std::size_t k = 0; k < seasons.size(); ++k) {
      const auto v = number_or_na(row[1 + 2 * k]);
      const auto n = number_or_na(row[2 + 2 * k]);
      if (!v) continue;
      out.push_back({row[0], seasons[k], n ? static_cast<int>(*n) : 0, *v});
    }
  }
  return out;
}

std::vector<CpaeResult> read_cpae_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  return read_cpae_table(in);
}

}  // namespace passchart
