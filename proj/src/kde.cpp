#include "passchart/kde.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace passchart {

void KdeConfig::validate() const {
  if (!(bandwidth_x > 0.0) || !(bandwidth_y > 0.0)) throw Error("KDE bandwidths must be positive");
}

double rule_of_thumb(double sd, double iqr, double n) noexcept {
  return 1.06 * std::min(sd, iqr / 1.34) * std::pow(n, -0.2);
}

double quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw InsufficientData("quantile of an empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double bandwidth_rule(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) throw InsufficientData("bandwidth rule needs at least two values");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double iqr = quantile(sorted, 0.75) - quantile(sorted, 0.25);
  const double h = rule_of_thumb(sd, iqr, static_cast<double>(n));
  return h > 0.0 && std::isfinite(h) ? h : kMinBandwidthYards;
}

KdeConfig default_kde_config(std::span<const FieldCoordinate> passes) {
  std::vector<double> xs, ys;
  xs.reserve(passes.size());
  ys.reserve(passes.size());
  for (const auto& p : passes) {
    xs.push_back(p.downfield);
    ys.push_back(p.lateral);
  }
  return {bandwidth_rule(xs), bandwidth_rule(ys)};
}

SurfaceGrid kde2d(std::span<const FieldCoordinate> passes, const KdeConfig& config,
                  const GridGeometry& geometry) {
  config.validate();
  if (passes.size() < 2) throw InsufficientData("KDE needs at least two located passes");
  const auto n = static_cast<Eigen::Index>(passes.size());
  // The product kernel factorizes, so the grid is Kx * Ky^T.
  Eigen::MatrixXd kx(geometry.nx, n);
  Eigen::MatrixXd ky(geometry.ny, n);
  const double norm_x = 1.0 / (std::sqrt(2.0 * std::numbers::pi) * config.bandwidth_x);
  const double norm_y = 1.0 / (std::sqrt(2.0 * std::numbers::pi) * config.bandwidth_y);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& p = passes[static_cast<std::size_t>(i)];
    for (int ix = 0; ix < geometry.nx; ++ix) {
      const double z = (geometry.x_center(ix) - p.downfield) / config.bandwidth_x;
      kx(ix, i) = norm_x * std::exp(-0.5 * z * z);
    }
    for (int iy = 0; iy < geometry.ny; ++iy) {
      const double z = (geometry.y_center(iy) - p.lateral) / config.bandwidth_y;
      ky(iy, i) = norm_y * std::exp(-0.5 * z * z);
    }
  }
  const Eigen::MatrixXd dens = kx * ky.transpose() / static_cast<double>(n);

  SurfaceGrid grid(geometry);
  for (int ix = 0; ix < geometry.nx; ++ix) {
    for (int iy = 0; iy < geometry.ny; ++iy) grid.at(ix, iy) = dens(ix, iy);
  }
  const double mass = grid.integral();
  if (!(mass > 0.0)) throw InsufficientData("KDE has no mass inside the analysis region");
  for (double& v : grid.values()) v /= mass;
  return grid;
}

SurfaceGrid kde2d(std::span<const FieldCoordinate> passes, const GridGeometry& geometry) {
  return kde2d(passes, default_kde_config(passes), geometry);
}

}  // namespace passchart
