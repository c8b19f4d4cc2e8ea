#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "passchart/core.hpp"

namespace passchart {

class GeometryMismatch : public Error {
 public:
  using Error::Error;
};

/// Regular cell-centred grid over the analysis region, 10 yards behind to 55
/// yards beyond scrimmage and sideline to sideline.
struct GridGeometry {
  double x_min = -10.0;
  double x_max = 55.0;
  double y_min = -kHalfFieldWidthYards;
  double y_max = kHalfFieldWidthYards;
  int nx = 0;
  int ny = 0;

  double dx() const noexcept { return (x_max - x_min) / nx; }
  double dy() const noexcept { return (y_max - y_min) / ny; }
  double cell_area() const noexcept { return dx() * dy(); }
  double x_center(int ix) const noexcept { return x_min + (ix + 0.5) * dx(); }
  double y_center(int iy) const noexcept { return y_min + (iy + 0.5) * dy(); }
  bool contains(const FieldCoordinate& c) const noexcept {
    return c.downfield >= x_min && c.downfield <= x_max && c.lateral >= y_min && c.lateral <= y_max;
  }

  friend bool operator==(const GridGeometry&, const GridGeometry&) = default;
};

inline constexpr double kDefaultResolution = 0.5;

/// Geometry whose cells are as close to `resolution` yards square as the
/// region allows.
GridGeometry make_geometry(double resolution = kDefaultResolution);

/// Scalar field on a GridGeometry, stored with x (downfield) as the outer index.
class SurfaceGrid {
 public:
  SurfaceGrid() = default;
  explicit SurfaceGrid(const GridGeometry& geometry, double fill = 0.0);

  const GridGeometry& geometry() const noexcept { return geometry_; }
  double& at(int ix, int iy) { return values_[index(ix, iy)]; }
  double at(int ix, int iy) const { return values_[index(ix, iy)]; }
  std::vector<double>& values() noexcept { return values_; }
  const std::vector<double>& values() const noexcept { return values_; }

  /// Midpoint-rule integral over the region.
  double integral() const noexcept;
  double min() const noexcept;
  double max() const noexcept;

 private:
  std::size_t index(int ix, int iy) const noexcept {
    return static_cast<std::size_t>(ix) * static_cast<std::size_t>(geometry_.ny) +
           static_cast<std::size_t>(iy);
  }

  GridGeometry geometry_;
  std::vector<double> values_;
};

void require_same_geometry(const SurfaceGrid& a, const SurfaceGrid& b);

/// CSV matrix: header "downfield\lateral,<lateral centers...>", then one row
/// per downfield cell center.
void write_grid_csv(std::ostream& out, const SurfaceGrid& grid);
void write_grid_csv(const std::filesystem::path& path, const SurfaceGrid& grid);
SurfaceGrid read_grid_csv(const std::filesystem::path& path);

}  // namespace passchart
