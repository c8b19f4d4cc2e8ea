#include <doctest.h>

#include <sstream>

#include "passchart/analysis.hpp"
#include "passchart/random.hpp"
#include "passchart/shrinkage.hpp"
#include "support.hpp"

using namespace passchart;

namespace {

double expit(double x) { return 1 / (1 + std::exp(-x)); }

// Normalized Gaussian bump sampled at cell centers.
SurfaceGrid bump(const GridGeometry& g, double mx, double my, double sd) {
  SurfaceGrid out(g);
  for (int ix = 0; ix < g.nx; ++ix) {
    for (int iy = 0; iy < g.ny; ++iy) {
      const double zx = (g.x_center(ix) - mx) / sd, zy = (g.y_center(iy) - my) / sd;
      out.at(ix, iy) = std::exp(-0.5 * (zx * zx + zy * zy));
    }
  }
  const double mass = out.integral();
  for (double& v : out.values()) v /= mass;
  return out;
}

template <class F>
SurfaceGrid field(const GridGeometry& g, F f) {
  SurfaceGrid out(g);
  for (int ix = 0; ix < g.nx; ++ix) {
    for (int iy = 0; iy < g.ny; ++iy) out.at(ix, iy) = f(g.x_center(ix), g.y_center(iy));
  }
  return out;
}

struct Case {
  GridGeometry g = make_geometry(2.0);
  SurfaceGrid fg = bump(g, 10, 5, 8);
  SurfaceGrid fl = bump(g, 15, 0, 12);
  SurfaceGrid pg = field(g, [](double x, double y) { return expit(1.2 - 0.05 * x + 0.01 * y); });
  SurfaceGrid pl = field(g, [](double x, double) { return expit(1.0 - 0.06 * x); });

  ShrinkageInputs inputs(double ng, double nm) const { return {&fg, &fl, &pg, &pl, ng, nm}; }
};

}  // namespace

TEST_CASE("shrinkage with no group passes is the league surface") {
  const Case c;
  const auto s = naive_bayes_surface(c.inputs(0, 250));
  CHECK(s.values() == c.pl.values());
}

TEST_CASE("shrinkage equal weights give the midpoint") {
  const GridGeometry g = make_geometry(5.0);
  const SurfaceGrid f(g, 0.01), pg(g, 0.8), pl(g, 0.6);
  const auto s = naive_bayes_surface({&f, &f, &pg, &pl, 100, 100});
  for (double v : s.values()) CHECK(v == doctest::Approx(0.7));
}

TEST_CASE("shrinkage scalar example") {
  // N_g f_g = 0.4, N_m f_NFL = 0.9, P_g = 0.8, P_NFL = 0.7.
  const GridGeometry g = make_geometry(5.0);
  const SurfaceGrid fg(g, 0.004), fl(g, 0.009), pg(g, 0.8), pl(g, 0.7);
  const auto s = naive_bayes_surface({&fg, &fl, &pg, &pl, 100, 100});
  const double expected = (0.4 * 0.8 + 0.9 * 0.7) / 1.3;
  CHECK(expected == doctest::Approx(0.7307692));
  for (double v : s.values()) CHECK(v == doctest::Approx(expected));
}

TEST_CASE("shrunk surface lies between group and league and moves toward the group") {
  const Case c;
  const auto few = naive_bayes_surface(c.inputs(20, 250));
  const auto many = naive_bayes_surface(c.inputs(2000, 250));
  for (std::size_t i = 0; i < few.values().size(); ++i) {
    const double lo = std::min(c.pg.values()[i], c.pl.values()[i]);
    const double hi = std::max(c.pg.values()[i], c.pl.values()[i]);
    CHECK(few.values()[i] >= lo - 1e-12);
    CHECK(few.values()[i] <= hi + 1e-12);
    CHECK(std::abs(many.values()[i] - c.pg.values()[i]) <=
          std::abs(few.values()[i] - c.pg.values()[i]) + 1e-12);
  }
}

TEST_CASE("shrinkage rejects mismatched grids") {
  const Case c;
  const SurfaceGrid other(make_geometry(5.0), 0.5);
  ShrinkageInputs in = c.inputs(10, 10);
  in.group_surface = &other;
  CHECK_THROWS_AS(naive_bayes_surface(in), GeometryMismatch);
  in = c.inputs(-1, 10);
  CHECK_THROWS(naive_bayes_surface(in));
}

TEST_CASE("cpae identities") {
  const Case c;
  CHECK(cpae(c.pl, c.pl, c.fg) == doctest::Approx(0.0));
  SurfaceGrid up = c.pl;
  for (double& v : up.values()) v += 0.05;
  CHECK(cpae(up, c.pl, c.fg) == doctest::Approx(5.0).epsilon(1e-9));
  // Linear in the difference.
  SurfaceGrid twice = c.pl;
  for (std::size_t i = 0; i < twice.values().size(); ++i) {
    twice.values()[i] += 2 * (c.pg.values()[i] - c.pl.values()[i]);
  }
  CHECK(cpae(twice, c.pl, c.fg) == doctest::Approx(2 * cpae(c.pg, c.pl, c.fg)).epsilon(1e-9));
  CHECK_THROWS_AS(cpae(c.pl, SurfaceGrid(make_geometry(5.0)), c.fg), GeometryMismatch);
}

TEST_CASE("cpae quadrature is stable under grid refinement") {
  auto compute = [](double res) {
    const GridGeometry g = make_geometry(res);
    const auto f = bump(g, 12, -4, 7);
    const auto pl = field(g, [](double x, double) { return expit(1.0 - 0.06 * x); });
    const auto pg = field(g, [](double x, double y) { return expit(1.3 - 0.05 * x + 0.02 * y); });
    return cpae(pg, pl, f);
  };
  const double coarse = compute(0.5);
  const double fine = compute(0.125);
  CHECK(std::abs(coarse) > 1.0);
  CHECK(std::abs(coarse - fine) < 0.1);
}

TEST_CASE("pearson correlation") {
  const std::vector<double> a{1, 2, 3, 4, 5};
  const std::vector<double> b{2, 4, 6, 8, 10};
  const std::vector<double> c{5, 3, 1, -1, -3};
  CHECK(pearson(a, b) == doctest::Approx(1.0));
  CHECK(pearson(a, c) == doctest::Approx(-1.0));
  Rng rng(4);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> x, y;
    for (int i = 0; i < 30; ++i) {
      x.push_back(rng.normal());
      y.push_back(0.5 * x.back() + rng.normal());
    }
    // Invariant under positive affine maps of either argument.
    std::vector<double> y2;
    for (double v : y) y2.push_back(3 * v - 7);
    CHECK(pearson(x, y) == doctest::Approx(pearson(x, y2)));
    CHECK(std::abs(pearson(x, y)) <= 1.0);
  }
}

TEST_CASE("cpae stability requires three pairs") {
  std::vector<CpaeResult> r{{"A", 2017, 300, 1.0}, {"A", 2018, 300, 2.0},
                            {"B", 2017, 300, 2.0}, {"B", 2018, 300, 3.0},
                            {"C", 2017, 300, 1.0}};
  CHECK_THROWS_AS(cpae_stability(r, 2017, 2018), InsufficientData);
  r.push_back({"C", 2018, 300, 2.0});
  const auto s = cpae_stability(r, 2017, 2018);
  CHECK(s.correlation == doctest::Approx(1.0));
  CHECK(s.groups == std::vector<std::string>{"A", "B", "C"});
}

TEST_CASE("published ranking table year-over-year correlation") {
  const auto results = read_cpae_table(std::filesystem::path(PASSCHART_TEST_DATA) / "cpae_2017_2018.csv");
  const auto s = cpae_stability(results, 2017, 2018);
  CHECK(s.groups.size() == 26);
  CHECK(s.correlation == doctest::Approx(0.41).epsilon(0.05 / 0.41));
}

TEST_CASE("cpae table round trip") {
  std::vector<CpaeResult> r{{"Tom Brady", 2017, 581, 2.53}, {"Tom Brady", 2018, 570, 1.27},
                            {"Case Keenum", 2017, 481, 3.51}, {"Nick Foles", 2018, 195, 1.11}};
  std::stringstream buf;
  write_cpae_table(buf, r, GroupBy::Qb);
  const std::string text = buf.str();
  CHECK(text.rfind("QB,CPAE17,npasses_2017,CPAE18,npasses_2018\n", 0) == 0);
  // Sorted by the last season, groups missing it last.
  CHECK(text.find("Tom Brady") < text.find("Nick Foles"));
  CHECK(text.find("Nick Foles") < text.find("Case Keenum"));
  auto back = read_cpae_table(buf);
  auto key = [](const CpaeResult& a) { return std::tuple(a.group, a.season); };
  std::sort(back.begin(), back.end(), [&](auto& a, auto& b) { return key(a) < key(b); });
  std::sort(r.begin(), r.end(), [&](auto& a, auto& b) { return key(a) < key(b); });
  REQUIRE(back.size() == r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    CHECK(back[i].group == r[i].group);
    CHECK(back[i].season == r[i].season);
    CHECK(back[i].n_passes == r[i].n_passes);
    CHECK(back[i].cpae == doctest::Approx(r[i].cpae));
  }
}

TEST_CASE("season analysis with a group equal to the league") {
  Rng rng(8);
  std::vector<PassRecord> recs;
  for (int i = 0; i < 600; ++i) {
    PassRecord p;
    p.game_id = "g" + std::to_string(i % 7);
    p.name = "Only QB";
    p.team = "AAA";
    p.season = 2019;
    const double x = rng.uniform(-5, 40);
    p.pass_type = rng.bernoulli(expit(1.2 - 0.06 * x)) ? PassOutcome::Complete : PassOutcome::Incomplete;
    p.coord = FieldCoordinate{x, rng.uniform(-20, 20)};
    recs.push_back(p);
  }
  AnalysisOptions opt;
  opt.geometry = make_geometry(1.0);
  opt.gam.domain = opt.geometry;
  opt.gam.lambdas = GamLambdas{10, 10, 10};
  const auto a = analyze_season(recs, 2019, opt);
  REQUIRE(a.groups.size() == 1);
  CHECK(a.groups[0].n_passes == 600);
  CHECK(a.prior_weight == 600);
  CHECK(a.groups[0].cpae == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(a.groups[0].difference.max() == doctest::Approx(0.0).epsilon(1e-9));
}
