#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "passchart/image.hpp"
#include "passchart/rectify.hpp"

namespace passchart {

class TooFewPoints : public Error {
 public:
  using Error::Error;
};

/// The chart cannot be read consistently with its metadata.
class ChartAnomalous : public Error {
 public:
  using Error::Error;
};

inline constexpr std::uint64_t kDefaultSeed = 42;

struct ClusterResult {
  std::vector<PixelPoint> centers;
  std::vector<int> assignments;          // cluster index per input point
  std::vector<double> within_variance;   // per cluster: sum of squared distances
  std::vector<double> inertia_history;   // total within variance after each update
  int iterations = 0;

  double total_within() const noexcept;
};

/// K-means++ seeding followed by Lloyd iterations until the assignment stops
/// changing or `max_iterations` is reached. Deterministic for a given seed.
ClusterResult kmeans_pp(std::span<const PixelPoint> points, int k, std::uint64_t seed,
                        int max_iterations = 100);

/// Best (lowest total within variance) of `restarts` seeded runs.
ClusterResult kmeans_best_of(std::span<const PixelPoint> points, int k, std::uint64_t seed,
                             int restarts);

inline constexpr int kDefaultRestarts = 4;

/// Marker centers for an outcome whose count is trusted. Throws
/// ChartAnomalous when the mask has fewer lit pixels than `n`.
std::vector<PixelPoint> extract_simple(const PixelMask& mask, int n, std::uint64_t seed);

struct ReconcileOptions {
  double marker_radius_px = 7.0;
  double close_factor = 1.5;    // centers nearer than this many radii are suspect
  double variance_ratio = 0.5;  // split clusters fall below this share of a full marker
  int restarts = kDefaultRestarts;
};

struct ReconcileResult {
  std::vector<PixelPoint> centers;
  int adjusted = 0;
};

/// Reduces the declared incompletion count until no pair of nearby centers
/// looks like one marker split in two.
ReconcileResult reconcile_incompletions(const PixelMask& mask, int n_inc, std::uint64_t seed,
                                        const ReconcileOptions& options = {});

struct DbscanParams {
  double epsilon = 10.0;
  int tau = 1;  // neighbourhood size (self included) that makes a point core

  void validate() const;
};

struct DbscanResult {
  std::vector<int> labels;  // cluster index per point, -1 for noise
  int clusters = 0;
};

/// Clusters are the connected components of core points; a border point joins
/// the cluster of its nearest core neighbour. Cluster indices are ordered by
/// each cluster's first point in (y, x) order, so the result does not depend on
/// input order.
DbscanResult dbscan(std::span<const PixelPoint> points, const DbscanParams& params);

struct TouchdownOptions {
  double epsilon = 10.0;
  double max_elongation = 4.0;  // covariance eigenvalue ratio above which a cluster is a line
  double min_fill = 0.4;        // pixel count over the disc area implied by the spread
  int restarts = kDefaultRestarts;
};

/// Ratio of the larger to the smaller principal variance of a point set.
double elongation(std::span<const PixelPoint> points);

/// Pixel count over 2*pi*trace(covariance), the area of a filled disc with
/// the same spread. Near 1 for a marker disc, small for arcs and line fans.
double fill_ratio(std::span<const PixelPoint> points);

/// DBSCAN denoising (tau = n_td) keeping the n_td largest compact clusters,
/// then K-means++ on what remains.
std::vector<PixelPoint> extract_touchdowns(const PixelMask& mask, int n_td, std::uint64_t seed,
                                           const TouchdownOptions& options = {});

/// Maps rectified pixel centers to field coordinates. Out-of-bounds results are
/// clamped and a warning appended.
std::vector<FieldCoordinate> pixels_to_field(std::span<const PixelPoint> centers,
                                             const FieldFrame& frame,
                                             std::vector<std::string>* warnings = nullptr);

}  // namespace passchart
