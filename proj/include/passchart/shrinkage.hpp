#pragma once

#include <span>
#include <string>
#include <vector>

#include "passchart/kde.hpp"
#include "passchart/surface.hpp"

namespace passchart {

struct ShrinkageInputs {
  const SurfaceGrid* group_density = nullptr;
  const SurfaceGrid* league_density = nullptr;
  const SurfaceGrid* group_surface = nullptr;
  const SurfaceGrid* league_surface = nullptr;
  double group_passes = 0.0;  // N_g
  double prior_weight = 1.0;  // N_Median

  void validate() const;
};

/// Cellwise blend of the group and league completion surfaces weighted by
/// N_g * f_g and N_Median * f_NFL. Cells with no weight keep the league value.
SurfaceGrid naive_bayes_surface(const ShrinkageInputs& in);

struct CpaeResult {
  std::string group;
  int season = 0;
  int n_passes = 0;
  double cpae = 0.0;  // percentage points
};

/// 100 * sum((shrunk - league) * density * cell area).
double cpae(const SurfaceGrid& shrunk, const SurfaceGrid& league, const SurfaceGrid& density);

double pearson(std::span<const double> a, std::span<const double> b);

struct StabilityResult {
  double correlation = 0.0;
  std::vector<std::string> groups;  // paired groups, sorted
};

/// Pearson correlation of CPAE for groups present in both seasons.
/// Throws InsufficientData with fewer than three pairs.
StabilityResult cpae_stability(std::span<const CpaeResult> results, int season_a, int season_b);

}  // namespace passchart
