#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "passchart/gam.hpp"
#include "passchart/kde.hpp"
#include "passchart/shrinkage.hpp"

namespace passchart {

enum class GroupBy { Qb, Defense, League };

GroupBy parse_group_by(std::string_view text);
std::string_view to_string(GroupBy g) noexcept;

struct AnalysisOptions {
  GroupBy group_by = GroupBy::Qb;
  int min_passes = 100;
  std::optional<double> prior_weight;  // median group size when absent
  GridGeometry geometry = make_geometry();
  GamConfig gam;
  unsigned jobs = 1;
};

struct GroupAnalysis {
  std::string group;
  int season = 0;
  int n_passes = 0;
  SurfaceGrid density;     // f_g
  SurfaceGrid surface;     // P_g
  SurfaceGrid shrunk;      // P*_G
  SurfaceGrid difference;  // P*_G - P_NFL
  double cpae = 0.0;
  std::vector<FieldCoordinate> passes;
};

struct SeasonAnalysis {
  int season = 0;
  int n_passes = 0;
  double prior_weight = 0.0;
  SurfaceGrid league_density;
  SurfaceGrid league_surface;
  std::vector<GroupAnalysis> groups;  // sorted by group name
  std::vector<std::string> warnings;  // groups skipped or failing to fit
};

/// Group key of a record, or nothing when it cannot be grouped (defense
/// without home/away teams).
std::optional<std::string> group_key(const PassRecord& r, GroupBy by);

/// Seasons with at least one located pass, ascending.
std::vector<int> seasons_in(std::span<const PassRecord> records);

/// League and per-group surfaces and CPAE for one season. Only located passes
/// inside the analysis region are used.
SeasonAnalysis analyze_season(std::span<const PassRecord> records, int season,
                              const AnalysisOptions& options);

std::vector<CpaeResult> cpae_results(std::span<const SeasonAnalysis> seasons);

/// Ranking table: group column, then CPAE<yy>,npasses_<yyyy> per season,
/// sorted by the last season's CPAE (descending, missing last).
void write_cpae_table(std::ostream& out, std::span<const CpaeResult> results, GroupBy by);
/// Reads the table layout above back into results.
std::vector<CpaeResult> read_cpae_table(std::istream& in);
std::vector<CpaeResult> read_cpae_table(const std::filesystem::path& path);

}  // namespace passchart
