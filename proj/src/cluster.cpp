#include "passchart/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <unordered_map>

#include "passchart/random.hpp"

namespace passchart {

namespace {

double sq_dist(const PixelPoint& a, const PixelPoint& b) noexcept {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

int nearest(const PixelPoint& p, const std::vector<PixelPoint>& centers, double* dist = nullptr) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < centers.size(); ++k) {
    const double d = sq_dist(p, centers[k]);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(k);
    }
  }
  if (dist) *dist = best_d;
  return best;
}

std::size_t sample_d2(const std::vector<double>& d2, double total, Rng& rng) {
  const std::size_t n = d2.size();
  if (!(total > 0.0)) return rng.index(n);
  const double target = rng.uniform() * total;
  double running = 0.0;
  std::size_t pick = n - 1;
  for (std::size_t i = 0; i < n; ++i) {
    running += d2[i];
    if (running > target && d2[i] > 0.0) {
      pick = i;
      break;
    }
  }
  while (d2[pick] == 0.0 && pick > 0) --pick;
  return pick;
}

// Greedy K-means++: each new center is the best of a few D^2-weighted draws.
std::vector<PixelPoint> seed_centers(std::span<const PixelPoint> points, int k, Rng& rng) {
  const std::size_t n = points.size();
  const int trials = 2 + static_cast<int>(std::log(static_cast<double>(k)));
  std::vector<PixelPoint> centers;
  centers.reserve(static_cast<std::size_t>(k));
  centers.push_back(points[rng.index(n)]);
  std::vector<double> d2(n), trial(n), best_d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = sq_dist(points[i], centers[0]);
  while (static_cast<int>(centers.size()) < k) {
    const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
    double best_potential = std::numeric_limits<double>::infinity();
    std::size_t best = 0;
    for (int t = 0; t < trials; ++t) {
      const std::size_t pick = sample_d2(d2, total, rng);
      double potential = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        trial[i] = std::min(d2[i], sq_dist(points[i], points[pick]));
        potential += trial[i];
      }
      if (potential < best_potential) {
        best_potential = potential;
        best = pick;
        best_d2.swap(trial);
      }
    }
    centers.push_back(points[best]);
    d2.swap(best_d2);
  }
  return centers;
}

double median(std::vector<double> values) {
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  double m = values[mid];
  if (values.size() % 2 == 0) {
    m = 0.5 * (m + *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid)));
  }
  return m;
}

// Sum of squared distances to the center over the pixel lattice of a disc.
double lattice_disc_variance(double radius) {
  const int r = static_cast<int>(std::ceil(radius));
  double total = 0.0;
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      const double d2 = dx * dx + dy * dy;
      if (d2 <= radius * radius) total += d2;
    }
  }
  return total;
}

struct CellKey {
  long cx;
  long cy;
  friend bool operator==(const CellKey&, const CellKey&) = default;
};

struct CellHash {
  std::size_t operator()(const CellKey& k) const noexcept {
    return std::hash<long>()(k.cx * 73856093L ^ k.cy * 19349663L);
  }
};

}  // namespace

double ClusterResult::total_within() const noexcept {
  return std::accumulate(within_variance.begin(), within_variance.end(), 0.0);
}

ClusterResult kmeans_pp(std::span<const PixelPoint> points, int k, std::uint64_t seed,
                        int max_iterations) {
  if (k < 1) throw TooFewPoints("K-means needs K >= 1");
  if (points.size() < static_cast<std::size_t>(k)) {
    throw TooFewPoints("K-means with K=" + std::to_string(k) + " on " +
                       std::to_string(points.size()) + " points");
  }
  const std::size_t n = points.size();
  const auto kk = static_cast<std::size_t>(k);
  Rng rng(seed);

  ClusterResult result;
  result.centers = seed_centers(points, k, rng);
  result.assignments.assign(n, -1);
  std::vector<double> dist(n);

  for (int iter = 0; iter < max_iterations; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      const int a = nearest(points[i], result.centers, &dist[i]);
      if (a != result.assignments[i]) {
        result.assignments[i] = a;
        changed = true;
      }
    }
    if (!changed) break;
    result.iterations = iter + 1;

    std::vector<double> sx(kk, 0.0), sy(kk, 0.0);
    std::vector<std::size_t> count(kk, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto a = static_cast<std::size_t>(result.assignments[i]);
      sx[a] += points[i].x;
      sy[a] += points[i].y;
      ++count[a];
    }
    for (std::size_t c = 0; c < kk; ++c) {
      if (count[c] > 0) {
        result.centers[c] = {sx[c] / count[c], sy[c] / count[c]};
        continue;
      }
      // Empty cluster: move its center onto the point worst served by its own center.
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = sq_dist(points[i], result.centers[static_cast<std::size_t>(result.assignments[i])]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      result.centers[c] = points[far];
    }
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      inertia += sq_dist(points[i], result.centers[static_cast<std::size_t>(result.assignments[i])]);
    }
    result.inertia_history.push_back(inertia);
  }

  result.within_variance.assign(kk, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto a = static_cast<std::size_t>(result.assignments[i]);
    result.within_variance[a] += sq_dist(points[i], result.centers[a]);
  }
  return result;
}

ClusterResult kmeans_best_of(std::span<const PixelPoint> points, int k, std::uint64_t seed,
                             int restarts) {
  ClusterResult best = kmeans_pp(points, k, seed);
  for (int r = 1; r < restarts; ++r) {
    ClusterResult candidate = kmeans_pp(points, k, derive_seed(seed, static_cast<std::uint64_t>(r)));
    if (candidate.total_within() < best.total_within()) best = std::move(candidate);
  }
  return best;
}

std::vector<PixelPoint> extract_simple(const PixelMask& mask, int n, std::uint64_t seed) {
  if (n < 0) throw Error("negative expected marker count");
  if (n == 0) return {};
  const auto points = mask.points();
  if (points.size() < static_cast<std::size_t>(n)) {
    throw ChartAnomalous("expected " + std::to_string(n) + " markers but mask has " +
                         std::to_string(points.size()) + " lit pixels");
  }
  return kmeans_best_of(points, n, seed, kDefaultRestarts).centers;
}

ReconcileResult reconcile_incompletions(const PixelMask& mask, int n_inc, std::uint64_t seed,
                                        const ReconcileOptions& options) {
  if (n_inc < 0) throw Error("negative incompletion count");
  const auto points = mask.points();
  int k = std::min<int>(n_inc, static_cast<int>(points.size()));
  ReconcileResult result;
  if (k == 0) return result;

  const double close = options.close_factor * options.marker_radius_px;
  while (k > 0) {
    ClusterResult clusters = kmeans_best_of(points, k, seed, options.restarts);
    const auto kk = static_cast<std::size_t>(k);
    std::vector<bool> crowded(kk, false);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t a = 0; a < kk; ++a) {
      for (std::size_t b = a + 1; b < kk; ++b) {
        if (sq_dist(clusters.centers[a], clusters.centers[b]) < close * close) {
          pairs.emplace_back(a, b);
          crowded[a] = crowded[b] = true;
        }
      }
    }
    bool split = false;
    if (!pairs.empty()) {
      std::vector<double> reference;
      for (std::size_t c = 0; c < kk; ++c) {
        if (!crowded[c]) reference.push_back(clusters.within_variance[c]);
      }
      const double typical = reference.empty() ? lattice_disc_variance(options.marker_radius_px)
                                               : median(reference);
      const double limit = options.variance_ratio * typical;
      for (auto [a, b] : pairs) {
        if (clusters.within_variance[a] < limit || clusters.within_variance[b] < limit) {
          split = true;
          break;
        }
      }
    }
    if (!split) {
      result.centers = std::move(clusters.centers);
      result.adjusted = k;
      return result;
    }
    --k;
  }
  return result;
}

void DbscanParams::validate() const {
  if (!(epsilon > 0.0)) throw Error("DBSCAN epsilon must be positive");
  if (tau < 1) throw Error("DBSCAN tau must be at least 1");
}

DbscanResult dbscan(std::span<const PixelPoint> points, const DbscanParams& params) {
  params.validate();
  const std::size_t n = points.size();
  const double eps2 = params.epsilon * params.epsilon;

  std::unordered_map<CellKey, std::vector<std::size_t>, CellHash> grid;
  auto cell_of = [&](const PixelPoint& p) {
    return CellKey{static_cast<long>(std::floor(p.x / params.epsilon)),
                   static_cast<long>(std::floor(p.y / params.epsilon))};
  };
  for (std::size_t i = 0; i < n; ++i) grid[cell_of(points[i])].push_back(i);

  auto neighbours = [&](std::size_t i) {
    std::vector<std::size_t> out;
    const CellKey c = cell_of(points[i]);
    for (long dy = -1; dy <= 1; ++dy) {
      for (long dx = -1; dx <= 1; ++dx) {
        auto it = grid.find({c.cx + dx, c.cy + dy});
        if (it == grid.end()) continue;
        for (std::size_t j : it->second) {
          if (sq_dist(points[i], points[j]) <= eps2) out.push_back(j);
        }
      }
    }
    return out;
  };

  std::vector<std::vector<std::size_t>> hood(n);
  std::vector<bool> core(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    hood[i] = neighbours(i);
    core[i] = static_cast<int>(hood[i].size()) >= params.tau;
  }

  // Connected components of core points.
  std::vector<int> component(n, -1);
  int components = 0;
  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < n; ++i) {
    if (!core[i] || component[i] >= 0) continue;
    component[i] = components;
    stack.push_back(i);
    while (!stack.empty()) {
      const std::size_t p = stack.back();
      stack.pop_back();
      for (std::size_t q : hood[p]) {
        if (core[q] && component[q] < 0) {
          component[q] = components;
          stack.push_back(q);
        }
      }
    }
    ++components;
  }

  // Border points join their nearest core neighbour; ties go to the core point
  // first in (y, x) order.
  auto before = [&](std::size_t a, std::size_t b) {
    return std::pair(points[a].y, points[a].x) < std::pair(points[b].y, points[b].x);
  };
  std::vector<int> raw(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    if (core[i]) {
      raw[i] = component[i];
      continue;
    }
    std::size_t best = n;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t q : hood[i]) {
      if (!core[q]) continue;
      const double d = sq_dist(points[i], points[q]);
      if (d < best_d || (d == best_d && before(q, best))) {
        best_d = d;
        best = q;
      }
    }
    if (best < n) raw[i] = component[best];
  }

  // Canonical numbering by each cluster's first member in (y, x) order.
  std::vector<std::size_t> first(static_cast<std::size_t>(components), n);
  for (std::size_t i = 0; i < n; ++i) {
    if (raw[i] < 0) continue;
    auto& f = first[static_cast<std::size_t>(raw[i])];
    if (f == n || before(i, f)) f = i;
  }
  std::vector<int> order(static_cast<std::size_t>(components));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return before(first[static_cast<std::size_t>(a)], first[static_cast<std::size_t>(b)]);
  });
  std::vector<int> rename(static_cast<std::size_t>(components));
  for (std::size_t r = 0; r < order.size(); ++r) rename[static_cast<std::size_t>(order[r])] = static_cast<int>(r);

  DbscanResult result;
  result.clusters = components;
  result.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    result.labels[i] = raw[i] < 0 ? -1 : rename[static_cast<std::size_t>(raw[i])];
  }
  return result;
}

double elongation(std::span<const PixelPoint> points) {
  if (points.size() < 2) return 1.0;
  double mx = 0.0, my = 0.0;
  for (const auto& p : points) {
    mx += p.x;
    my += p.y;
  }
  const double n = static_cast<double>(points.size());
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (const auto& p : points) {
    sxx += (p.x - mx) * (p.x - mx);
    syy += (p.y - my) * (p.y - my);
    sxy += (p.x - mx) * (p.y - my);
  }
  sxx /= n;
  syy /= n;
  sxy /= n;
  const double mean = 0.5 * (sxx + syy);
  const double spread = std::sqrt(0.25 * (sxx - syy) * (sxx - syy) + sxy * sxy);
  const double major = mean + spread;
  const double minor = mean - spread;
  if (minor <= 1e-12) return std::numeric_limits<double>::infinity();
  return major / minor;
}

double fill_ratio(std::span<const PixelPoint> points) {
  if (points.size() < 2) return 1.0;
  double mx = 0.0, my = 0.0;
  for (const auto& p : points) {
    mx += p.x;
    my += p.y;
  }
  const double n = static_cast<double>(points.size());
  mx /= n;
  my /= n;
  double trace = 0.0;
  for (const auto& p : points) trace += (p.x - mx) * (p.x - mx) + (p.y - my) * (p.y - my);
  trace /= n;
  return n / (2.0 * std::numbers::pi * std::max(trace, 1e-12));
}

std::vector<PixelPoint> extract_touchdowns(const PixelMask& mask, int n_td, std::uint64_t seed,
                                           const TouchdownOptions& options) {
  if (n_td < 0) throw Error("negative touchdown count");
  if (n_td == 0) return {};
  const auto points = mask.points();
  const DbscanResult db = dbscan(points, {options.epsilon, n_td});

  std::vector<std::vector<PixelPoint>> members(static_cast<std::size_t>(db.clusters));
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (db.labels[i] >= 0) members[static_cast<std::size_t>(db.labels[i])].push_back(points[i]);
  }
  std::vector<std::size_t> compact;
  for (std::size_t c = 0; c < members.size(); ++c) {
    if (elongation(members[c]) <= options.max_elongation && fill_ratio(members[c]) >= options.min_fill) {
      compact.push_back(c);
    }
  }
  if (compact.size() < static_cast<std::size_t>(n_td)) {
    throw ChartAnomalous("found " + std::to_string(compact.size()) +
                         " compact touchdown clusters, expected " + std::to_string(n_td));
  }
  std::stable_sort(compact.begin(), compact.end(), [&](std::size_t a, std::size_t b) {
    return members[a].size() > members[b].size();
  });
  std::vector<PixelPoint> kept;
  for (int i = 0; i < n_td; ++i) {
    const auto& m = members[compact[static_cast<std::size_t>(i)]];
    kept.insert(kept.end(), m.begin(), m.end());
  }
  std::sort(kept.begin(), kept.end(),
            [](const PixelPoint& a, const PixelPoint& b) { return std::pair(a.y, a.x) < std::pair(b.y, b.x); });
  if (kept.size() < static_cast<std::size_t>(n_td)) {
    throw ChartAnomalous("touchdown clusters hold fewer pixels than touchdowns");
  }
  return kmeans_best_of(kept, n_td, seed, options.restarts).centers;
}

std::vector<FieldCoordinate> pixels_to_field(std::span<const PixelPoint> centers,
                                             const FieldFrame& frame,
                                             std::vector<std::string>* warnings) {
  std::vector<FieldCoordinate> out;
  out.reserve(centers.size());
  for (const auto& p : centers) {
    FieldCoordinate c = frame.to_field(p);
    if (c.clamp_to_bounds() && warnings) {
      warnings->push_back("marker at pixel (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                          ") clamped into the field");
    }
    out.push_back(c);
  }
  return out;
}

}  // namespace passchart
