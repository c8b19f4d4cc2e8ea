#include "passchart/surface.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>

#include "passchart/csv.hpp"

namespace passchart {

namespace {

std::string grid_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

GridGeometry make_geometry(double resolution) {
  if (!(resolution > 0.0)) throw Error("grid resolution must be positive");
  GridGeometry g;
  g.nx = std::max(1, static_cast<int>(std::lround((g.x_max - g.x_min) / resolution)));
  g.ny = std::max(1, static_cast<int>(std::lround((g.y_max - g.y_min) / resolution)));
  return g;
}

SurfaceGrid::SurfaceGrid(const GridGeometry& geometry, double fill)
    : geometry_(geometry),
      values_(static_cast<std::size_t>(geometry.nx) * static_cast<std::size_t>(geometry.ny), fill) {
  if (geometry.nx <= 0 || geometry.ny <= 0) throw Error("grid needs at least one cell");
}

double SurfaceGrid::integral() const noexcept {
  return std::accumulate(values_.begin(), values_.end(), 0.0) * geometry_.cell_area();
}

double SurfaceGrid::min() const noexcept {
  return values_.empty() ? 0.0 : *std::min_element(values_.begin(), values_.end());
}

double SurfaceGrid::max() const noexcept {
  return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end());
}

void require_same_geometry(const SurfaceGrid& a, const SurfaceGrid& b) {
  if (!(a.geometry() == b.geometry())) throw GeometryMismatch("surface grids differ in geometry");
}

void write_grid_csv(std::ostream& out, const SurfaceGrid& grid) {
  const GridGeometry& g = grid.geometry();
  CsvRow header{"downfield\\lateral"};
  for (int iy = 0; iy < g.ny; ++iy) header.push_back(grid_number(g.y_center(iy)));
  write_csv_row(out, header);
  for (int ix = 0; ix < g.nx; ++ix) {
    CsvRow row{grid_number(g.x_center(ix))};
    for (int iy = 0; iy < g.ny; ++iy) row.push_back(grid_number(grid.at(ix, iy)));
    write_csv_row(out, row);
  }
}

void write_grid_csv(const std::filesystem::path& path, const SurfaceGrid& grid) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  write_grid_csv(out, grid);
}

SurfaceGrid read_grid_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  CsvReader reader(in);
  CsvRow header;
  if (!reader.next(header) || header.size() < 2) throw Error(path.string() + ": empty grid");
  std::vector<double> ys;
  for (std::size_t i = 1; i < header.size(); ++i) ys.push_back(std::stod(header[i]));
  std::vector<double> xs;
  std::vector<double> values;
  CsvRow row;
  while (reader.next(row)) {
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() != header.size()) throw Error(path.string() + ": ragged grid row");
    xs.push_back(std::stod(row[0]));
    for (std::size_t i = 1; i < row.size(); ++i) values.push_back(std::stod(row[i]));
  }
  if (xs.empty()) throw Error(path.string() + ": grid has no rows");
  GridGeometry g;
  g.nx = static_cast<int>(xs.size());
  g.ny = static_cast<int>(ys.size());
  // Cell centers determine the extent: half a cell beyond the outer centers.
  const double dx = g.nx > 1 ? (xs.back() - xs.front()) / (g.nx - 1) : 2.0 * (xs[0] - g.x_min);
  const double dy = g.ny > 1 ? (ys.back() - ys.front()) / (g.ny - 1) : 2.0 * (ys[0] - g.y_min);
  const GridGeometry standard = make_geometry(dx);
  if (standard.nx == g.nx && standard.ny == g.ny) {
    g = standard;
  } else {
    g.x_min = xs.front() - 0.5 * dx;
    g.x_max = xs.back() + 0.5 * dx;
    g.y_min = ys.front() - 0.5 * dy;
    g.y_max = ys.back() + 0.5 * dy;
  }
  SurfaceGrid grid(g);
  grid.values() = std::move(values);
  return grid;
}

}  // namespace passchart
