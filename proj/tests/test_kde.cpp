#include <doctest.h>

#include <numbers>

#include "passchart/kde.hpp"
#include "passchart/random.hpp"
#include "support.hpp"

using namespace passchart;

namespace {

// Independent recomputation of the rule: sample sd and type-7 quartiles.
double hand_bandwidth(std::vector<double> v) {
  const double n = static_cast<double>(v.size());
  double mean = 0;
  for (double x : v) mean += x / n;
  double ss = 0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / (n - 1));
  std::sort(v.begin(), v.end());
  auto q = [&](double p) {
    const double h = (n - 1) * p;
    const std::size_t lo = static_cast<std::size_t>(h);
    return v[lo] + (h - std::floor(h)) * (v[std::min(lo + 1, v.size() - 1)] - v[lo]);
  };
  const double iqr = q(0.75) - q(0.25);
  return 1.06 * std::min(sd, iqr / 1.34) * std::pow(n, -0.2);
}

}  // namespace

TEST_CASE("bandwidth rule") {
  CHECK(rule_of_thumb(1.0, 1.34, 1.0) == doctest::Approx(1.06));
  CHECK(rule_of_thumb(2.0, 1.34, 32.0) == doctest::Approx(0.53));

  Rng rng(100);
  std::vector<double> draws;
  for (int i = 0; i < 100; ++i) draws.push_back(rng.normal());
  const double h = bandwidth_rule(draws);
  CHECK(h == doctest::Approx(hand_bandwidth(draws)).epsilon(1e-12));
  CHECK(h == doctest::Approx(1.06 * std::pow(100.0, -0.2)).epsilon(0.25));

  CHECK(bandwidth_rule(std::vector<double>(10, 3.0)) == kMinBandwidthYards);
  CHECK_THROWS_AS(bandwidth_rule(std::vector<double>{1.0}), InsufficientData);
}

TEST_CASE("type 7 quantiles") {
  const std::vector<double> v{1, 2, 3, 4};
  CHECK(quantile(v, 0.25) == doctest::Approx(1.75));
  CHECK(quantile(v, 0.5) == doctest::Approx(2.5));
  CHECK(quantile(v, 1.0) == doctest::Approx(4));
  CHECK(quantile(v, 0.0) == doctest::Approx(1));
}

TEST_CASE("kde preconditions") {
  const GridGeometry g = make_geometry();
  CHECK(g.nx == 130);
  CHECK(g.ny == 107);
  std::vector<FieldCoordinate> one{{1, 1}};
  CHECK_THROWS_AS(kde2d(one, g), InsufficientData);
  std::vector<FieldCoordinate> two{{1, 1}, {2, 2}};
  CHECK_THROWS_AS(kde2d(two, KdeConfig{0.0, 1.0}, g), Error);
  // Identical points fall back to the minimum bandwidth.
  std::vector<FieldCoordinate> same(5, FieldCoordinate{10, 3});
  const auto grid = kde2d(same, g);
  CHECK(grid.integral() == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("kde symmetric under a half turn about the region center") {
  const GridGeometry g = make_geometry();
  const double cx = 0.5 * (g.x_min + g.x_max);
  std::vector<FieldCoordinate> pts{{cx + 7, 4}, {cx - 7, -4}};
  const auto grid = kde2d(pts, g);
  for (int ix = 0; ix < g.nx; ++ix) {
    for (int iy = 0; iy < g.ny; ++iy) {
      CHECK(grid.at(ix, iy) == doctest::Approx(grid.at(g.nx - 1 - ix, g.ny - 1 - iy)).epsilon(1e-9));
    }
  }
}

TEST_CASE("kde unit mass and non-negativity on random inputs") {
  Rng rng(31);
  const GridGeometry g = make_geometry();
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<FieldCoordinate> pts;
    const int n = 2 + static_cast<int>(rng.index(300));
    for (int i = 0; i < n; ++i) pts.push_back({rng.uniform(-10, 75), rng.uniform(-26.6, 26.6)});
    const auto grid = kde2d(pts, g);
    CHECK(grid.integral() == doctest::Approx(1.0).epsilon(0.01));
    CHECK(grid.min() >= 0.0);
  }
}

TEST_CASE("kde beats a 5-yard histogram on a known normal") {
  Rng rng(12);
  const GridGeometry g = make_geometry();
  const double mx = 20, my = 0, sd = 5;
  std::vector<FieldCoordinate> pts;
  for (int i = 0; i < 1000; ++i) pts.push_back({rng.normal(mx, sd), rng.normal(my, sd)});
  const auto kde = kde2d(pts, g);

  auto truth = [&](double x, double y) {
    const double zx = (x - mx) / sd, zy = (y - my) / sd;
    return std::exp(-0.5 * (zx * zx + zy * zy)) / (2 * std::numbers::pi * sd * sd);
  };
  auto bin = [](double v, double lo) { return static_cast<int>(std::floor((v - lo) / 5.0)); };
  std::map<std::pair<int, int>, int> counts;
  for (const auto& p : pts) ++counts[{bin(p.downfield, g.x_min), bin(p.lateral, g.y_min)}];

  double ise_kde = 0, ise_hist = 0;
  for (int ix = 0; ix < g.nx; ++ix) {
    for (int iy = 0; iy < g.ny; ++iy) {
      const double x = g.x_center(ix), y = g.y_center(iy);
      const double f = truth(x, y);
      const auto it = counts.find({bin(x, g.x_min), bin(y, g.y_min)});
      const double hist = it == counts.end() ? 0.0 : it->second / (1000.0 * 25.0);
      ise_kde += (kde.at(ix, iy) - f) * (kde.at(ix, iy) - f) * g.cell_area();
      ise_hist += (hist - f) * (hist - f) * g.cell_area();
    }
  }
  CHECK(ise_kde < ise_hist);
}

TEST_CASE("grid csv round trip") {
  testing::TempDir dir("grid");
  const GridGeometry g = make_geometry(1.0);
  SurfaceGrid grid(g);
  for (int ix = 0; ix < g.nx; ++ix) {
    for (int iy = 0; iy < g.ny; ++iy) grid.at(ix, iy) = ix * 0.001 + iy * 1e-6;
  }
  write_grid_csv(dir / "g.csv", grid);
  const SurfaceGrid back = read_grid_csv(dir / "g.csv");
  CHECK(back.geometry() == g);
  for (std::size_t i = 0; i < grid.values().size(); ++i) {
    CHECK(back.values()[i] == doctest::Approx(grid.values()[i]).epsilon(1e-8));
  }
  CHECK_THROWS_AS(require_same_geometry(grid, SurfaceGrid(make_geometry())), GeometryMismatch);
}
