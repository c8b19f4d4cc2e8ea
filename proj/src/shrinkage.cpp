#include "passchart/shrinkage.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace passchart {

void ShrinkageInputs::validate() const {
  if (!group_density || !league_density || !group_surface || !league_surface) {
    throw Error("shrinkage needs all four surfaces");
  }
  require_same_geometry(*group_density, *league_density);
  require_same_geometry(*group_density, *group_surface);
  require_same_geometry(*group_density, *league_surface);
  if (!(group_passes >= 0.0)) throw Error("group pass count must be non-negative");
  if (!(prior_weight > 0.0)) throw Error("prior weight must be positive");
}

SurfaceGrid naive_bayes_surface(const ShrinkageInputs& in) {
  in.validate();
  SurfaceGrid out(in.league_surface->geometry());
  const auto& fg = in.group_density->values();
  const auto& fl = in.league_density->values();
  const auto& pg = in.group_surface->values();
  const auto& pl = in.league_surface->values();
  auto& v = out.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double wg = in.group_passes * fg[i];
    const double wl = in.prior_weight * fl[i];
    const double w = wg + wl;
    v[i] = w > 0.0 ? (wg * pg[i] + wl * pl[i]) / w : pl[i];
    if (wg == 0.0) v[i] = pl[i];
  }
  return out;
}

double cpae(const SurfaceGrid& shrunk, const SurfaceGrid& league, const SurfaceGrid& density) {
  require_same_geometry(shrunk, league);
  require_same_geometry(shrunk, density);
  const auto& s = shrunk.values();
  const auto& l = league.values();
  const auto& f = density.values();
  double sum = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) sum += (s[i] - l[i]) * f[i];
  return 100.0 * sum * shrunk.geometry().cell_area();
}

double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error("pearson needs paired samples");
  if (a.size() < 2) throw InsufficientData("pearson needs at least two pairs");
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) throw InsufficientData("pearson of a constant sample");
  return sab / std::sqrt(saa * sbb);
}

StabilityResult cpae_stability(std::span<const CpaeResult> results, int season_a, int season_b) {
  std::map<std::string, double> a, b;
  for (const auto& r : results) {
    if (r.season == season_a) a[r.group] = r.cpae;
    if (r.season == season_b) b[r.group] = r.cpae;
  }
  StabilityResult out;
  std::vector<double> xs, ys;
  for (const auto& [group, value] : a) {
    const auto it = b.find(group);
    if (it == b.end()) continue;
    out.groups.push_back(group);
    xs.push_back(value);
    ys.push_back(it->second);
  }
  if (xs.size() < 3) {
    throw InsufficientData("CPAE stability needs at least 3 groups in both seasons, found " +
                           std::to_string(xs.size()));
  }
  out.correlation = pearson(xs, ys);
  return out;
}

}  // namespace passchart
