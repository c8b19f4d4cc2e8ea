#include <doctest.h>

#include <numeric>
#include <set>
#include <sstream>

#include "passchart/linkage.hpp"
#include "passchart/random.hpp"
#include "support.hpp"

using namespace passchart;

TEST_CASE("tracking coordinates relative to scrimmage") {
  TrackedPass t{"g", "QB", 30.0, 26.665, 42.0, 20.665, false};
  auto c = to_los_relative(t);
  CHECK(c.downfield == doctest::Approx(12.0));
  CHECK(c.lateral == doctest::Approx(-6.0));
  t = {"g", "QB", 70.0, 26.665, 58.0, 32.665, true};
  c = to_los_relative(t);
  CHECK(c.downfield == doctest::Approx(12.0));
  CHECK(c.lateral == doctest::Approx(-6.0));

  // Inverse map: place a known relative point back on the field.
  Rng rng(2);
  for (int i = 0; i < 100; ++i) {
    const bool left = rng.bernoulli(0.5);
    const double s = left ? -1 : 1;
    const double snap = rng.uniform(20, 100);
    const FieldCoordinate want{rng.uniform(-10, 40), rng.uniform(-26, 26)};
    const TrackedPass p{"g", "QB", snap, rng.uniform(0, 53.3), snap + s * want.downfield,
                        26.665 + s * want.lateral, left};
    const auto got = to_los_relative(p);
    CHECK(got.downfield == doctest::Approx(want.downfield));
    CHECK(got.lateral == doctest::Approx(want.lateral));
  }
}

TEST_CASE("greedy linking small cases") {
  const std::vector<FieldCoordinate> a{{1, 2}, {10, -3}, {25, 8}};
  auto s = greedy_link(a, a);
  REQUIRE(s.links.size() == 3);
  for (const auto& l : s.links) {
    CHECK(l.chart == l.tracked);
    CHECK(l.distance == 0.0);
  }

  const std::vector<FieldCoordinate> one{{0, 0}};
  const std::vector<FieldCoordinate> two{{3, 4}, {10, 10}};
  s = greedy_link(one, two);
  REQUIRE(s.links.size() == 1);
  CHECK(s.links[0].tracked == 0);
  CHECK(s.links[0].distance == doctest::Approx(5.0));
  CHECK(s.unlinked_tracked == std::vector<std::size_t>{1});
  CHECK(s.unlinked_chart.empty());

  // Greedy is not optimal: the closest pair is taken first.
  const std::vector<FieldCoordinate> c{{0, 0}, {0, 2}};
  const std::vector<FieldCoordinate> t{{0, 1.1}, {0, -5}};
  s = greedy_link(c, t);
  REQUIRE(s.links.size() == 2);
  CHECK(s.links[0].chart == 1);
  CHECK(s.links[0].tracked == 0);

  CHECK(greedy_link({}, two).links.empty());
}

TEST_CASE("greedy linking properties") {
  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<FieldCoordinate> c, t;
    const int nc = 1 + static_cast<int>(rng.index(15));
    const int nt = 1 + static_cast<int>(rng.index(15));
    for (int i = 0; i < nc; ++i) c.push_back({rng.uniform(-5, 40), rng.uniform(-25, 25)});
    for (int i = 0; i < nt; ++i) t.push_back({rng.uniform(-5, 40), rng.uniform(-25, 25)});
    const auto s = greedy_link(c, t);
    CHECK(s.links.size() == static_cast<std::size_t>(std::min(nc, nt)));
    CHECK(s.links.size() + s.unlinked_chart.size() == c.size());
    CHECK(s.links.size() + s.unlinked_tracked.size() == t.size());
    for (std::size_t i = 1; i < s.links.size(); ++i) CHECK(s.links[i].distance >= s.links[i - 1].distance);
    for (const auto& l : s.links) CHECK(l.distance == doctest::Approx(testing::dist(c[l.chart], t[l.tracked])));

    // Relabeling either list does not change which points get paired.
    std::vector<std::size_t> perm(t.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), std::mt19937(trial));
    std::vector<FieldCoordinate> tp;
    for (auto k : perm) tp.push_back(t[k]);
    const auto sp = greedy_link(c, tp);
    std::set<std::pair<std::size_t, std::size_t>> a, b;
    for (const auto& l : s.links) a.emplace(l.chart, l.tracked);
    for (const auto& l : sp.links) b.emplace(l.chart, perm[l.tracked]);
    CHECK(a == b);
  }
}

TEST_CASE("linking recovers the pairing under location noise") {
  Rng rng(23);
  const double sigma = 1.0;
  std::size_t correct = 0, total = 0;
  std::vector<double> d;
  for (int game = 0; game < 60; ++game) {
    std::vector<FieldCoordinate> truth, chart;
    for (int i = 0; i < 20; ++i) {
      truth.push_back({rng.uniform(-5, 45), rng.uniform(-25, 25)});
      chart.push_back({truth.back().downfield + rng.normal(0, sigma), truth.back().lateral + rng.normal(0, sigma)});
    }
    const auto s = greedy_link(chart, truth);
    for (const auto& l : s.links) {
      correct += l.chart == l.tracked;
      ++total;
      d.push_back(l.distance);
    }
  }
  CHECK(static_cast<double>(correct) / total >= 0.95);
  const double med = median(d);
  const double rayleigh_median = sigma * std::sqrt(2 * std::log(2.0));
  CHECK(med == doctest::Approx(rayleigh_median).epsilon(0.2));
  double mean = 0;
  for (double v : d) mean += v / d.size();
  CHECK(mean > med);
}

TEST_CASE("median") {
  CHECK(median({3, 1, 2}) == 2);
  CHECK(median({4, 1, 2, 3}) == 2.5);
  CHECK(std::isnan(median({})));
}

TEST_CASE("tracked pass table") {
  std::istringstream in(
      "passer,game_id,snap_x,snap_y,catch_x,catch_y,play_direction\n"
      "Tom Brady,g1,30,26.665,40,30.665,right\n"
      "Tom Brady,g1,,26.665,40,30.665,right\n"
      "Tom Brady,g1,30,26.665,,,right\n"
      "Tom Brady,g1,80,20,70,24,left\n"
      "short,row\n");
  const auto t = read_tracked_passes(in);
  REQUIRE(t.passes.size() == 2);
  CHECK(t.warnings.size() == 3);
  CHECK(t.passes[0].game_id == "g1");
  CHECK_FALSE(t.passes[0].offense_moves_left);
  CHECK(t.passes[1].offense_moves_left);

  std::istringstream bad("game_id,passer,snap_x\n");
  CHECK_THROWS(read_tracked_passes(bad));
}

TEST_CASE("linking chart records to tracking by game and passer") {
  std::vector<PassRecord> chart;
  auto rec = [](std::string game, std::string name, PassOutcome o, std::optional<FieldCoordinate> c) {
    PassRecord r;
    r.game_id = std::move(game);
    r.name = std::move(name);
    r.pass_type = o;
    r.coord = c;
    return r;
  };
  chart.push_back(rec("g1", "A B", PassOutcome::Complete, FieldCoordinate{10, 2}));
  chart.push_back(rec("g1", "A B", PassOutcome::Touchdown, FieldCoordinate{30, -5}));
  chart.push_back(rec("g1", "A B", PassOutcome::Incomplete, FieldCoordinate{5, 5}));
  chart.push_back(rec("g1", "A B", PassOutcome::Interception, FieldCoordinate{15, 0}));
  chart.push_back(rec("g2", "C D", PassOutcome::Complete, FieldCoordinate{3, 3}));
  std::vector<TrackedPass> tracked{{"g1", "A B", 50, 26.665, 60.5, 28.665, false},
                                   {"g1", "A B", 50, 26.665, 80, 21.665, false},
                                   {"g3", "E F", 50, 26.665, 60, 26.665, false}};
  const auto report = link_games(chart, tracked);
  REQUIRE(report.games.size() == 3);
  CHECK(report.games[0].game_id == "g1");
  CHECK(report.games[0].links.links.size() == 2);
  CHECK(report.distances() == std::vector<double>{0.0, 0.5});
  CHECK(report.median_distance() == doctest::Approx(0.25));
  CHECK(report.warnings.size() == 2);

  std::ostringstream out;
  write_link_report(out, report);
  CHECK(out.str().rfind("game_id,passer,chart_x,chart_y,tracked_x,tracked_y,distance\n", 0) == 0);
  std::ostringstream summary;
  write_link_summary(summary, report);
  CHECK(summary.str().find("ALL") != std::string::npos);
}
