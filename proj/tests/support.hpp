#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include <unistd.h>

#include "passchart/core.hpp"
#include "passchart/image.hpp"

namespace testing {

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("passchart_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void draw_disc(passchart::PixelMask& m, double cx, double cy, double r) {
  for (int y = static_cast<int>(std::floor(cy - r)); y <= static_cast<int>(std::ceil(cy + r)); ++y) {
    for (int x = static_cast<int>(std::floor(cx - r)); x <= static_cast<int>(std::ceil(cx + r)); ++x) {
      if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r && m.contains(x, y)) m.set(x, y);
    }
  }
}

inline double dist(const passchart::PixelPoint& a, const passchart::PixelPoint& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

inline double dist(const passchart::FieldCoordinate& a, const passchart::FieldCoordinate& b) {
  return std::hypot(a.downfield - b.downfield, a.lateral - b.lateral);
}

// Closest-pair-first matching; returns the matched distances (one per matched
// pair). Good enough as an oracle when errors are far below point spacing.
template <class P>
std::vector<double> match_distances(const std::vector<P>& a, const std::vector<P>& b) {
  std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) pairs.emplace_back(dist(a[i], b[j]), i, j);
  }
  std::sort(pairs.begin(), pairs.end());
  std::vector<bool> ua(a.size()), ub(b.size());
  std::vector<double> out;
  for (auto [d, i, j] : pairs) {
    if (ua[i] || ub[j]) continue;
    ua[i] = ub[j] = true;
    out.push_back(d);
  }
  return out;
}

struct OutcomeSummary {
  int records = 0;
  int located = 0;
  std::vector<passchart::FieldCoordinate> coords;
};

inline std::map<passchart::PassOutcome, OutcomeSummary> by_outcome(
    const std::vector<passchart::PassRecord>& records) {
  std::map<passchart::PassOutcome, OutcomeSummary> out;
  for (auto o : passchart::kAllOutcomes) out[o];
  for (const auto& r : records) {
    auto& s = out[r.pass_type];
    ++s.records;
    if (r.coord) {
      ++s.located;
      s.coords.push_back(*r.coord);
    }
  }
  return out;
}

}  // namespace testing
