#pragma once

#include <span>

#include "passchart/surface.hpp"

namespace passchart {

class InsufficientData : public Error {
 public:
  using Error::Error;
};

inline constexpr double kMinBandwidthYards = 0.5;

struct KdeConfig {
  double bandwidth_x = 1.0;  // downfield, yards
  double bandwidth_y = 1.0;  // lateral, yards

  void validate() const;
};

/// 1.06 * min(sd, IQR / 1.34) * n^(-1/5).
double rule_of_thumb(double sd, double iqr, double n) noexcept;

/// Sample quantile with linear interpolation between order statistics
/// (Hyndman-Fan type 7).
double quantile(std::span<const double> sorted, double p);

/// Rule-of-thumb bandwidth for one dimension; zero spread falls back to
/// kMinBandwidthYards. Throws InsufficientData for fewer than two values.
double bandwidth_rule(std::span<const double> values);

KdeConfig default_kde_config(std::span<const FieldCoordinate> passes);

/// Product-Gaussian KDE evaluated at cell centers and rescaled so the grid
/// integrates to one over the bounded region.
SurfaceGrid kde2d(std::span<const FieldCoordinate> passes, const KdeConfig& config,
                  const GridGeometry& geometry);

/// KDE with rule-of-thumb bandwidths.
SurfaceGrid kde2d(std::span<const FieldCoordinate> passes, const GridGeometry& geometry);

}  // namespace passchart
