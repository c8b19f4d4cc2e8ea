#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace passchart {

// Field geometry in yards. The lateral axis spans the full field width and is
// centered on the middle of the field.
inline constexpr double kFieldWidthYards = 53.33;
inline constexpr double kHalfFieldWidthYards = kFieldWidthYards / 2.0;
inline constexpr double kYardsBehindScrimmage = 10.0;
inline constexpr double kMaxDownfieldYards = 75.0;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InconsistentMetadata : public Error {
 public:
  using Error::Error;
};

/// Position of a pass target relative to the line of scrimmage.
///
/// `downfield` is the x axis of every analytics model: yards past the line of
/// scrimmage, negative behind it. `lateral` is the y axis: yards from the
/// center of the field, positive toward the right-hand side of the chart image
/// (the offense is drawn moving up the image).
struct FieldCoordinate {
  double downfield = 0.0;
  double lateral = 0.0;

  bool within_bounds() const noexcept;
  /// Clamp into the chart region; returns true when a component moved.
  bool clamp_to_bounds() noexcept;

  friend bool operator==(const FieldCoordinate&, const FieldCoordinate&) = default;
};

enum class PassOutcome { Complete, Incomplete, Touchdown, Interception };

inline constexpr PassOutcome kAllOutcomes[] = {
    PassOutcome::Complete, PassOutcome::Touchdown, PassOutcome::Interception,
    PassOutcome::Incomplete};

std::string_view to_string(PassOutcome outcome) noexcept;
/// Accepts the upper-case CSV spelling ("COMPLETE", ...) case-insensitively.
PassOutcome parse_outcome(std::string_view text);

/// Touchdowns count as completions; incompletions and interceptions do not.
constexpr bool is_completion(PassOutcome outcome) noexcept {
  return outcome == PassOutcome::Complete || outcome == PassOutcome::Touchdown;
}

enum class SeasonType { Regular, Post };

std::string_view to_string(SeasonType type) noexcept;
SeasonType parse_season_type(std::string_view text);

struct ChartMetadata {
  int completions = 0;  // total completions, touchdowns included
  int touchdowns = 0;
  int attempts = 0;
  int interceptions = 0;
  std::string image_ref;
  std::string week;
  std::string game_id;
  int season = 0;
  std::string first_name;
  std::string last_name;
  std::string team;
  std::string position;
  SeasonType season_type = SeasonType::Regular;

  std::string player_name() const;
};

struct PassCounts {
  int completions = 0;           // green markers: completions without touchdowns
  int touchdowns = 0;
  int interceptions = 0;
  int incompletions = 0;         // expected from the metadata
  int incompletions_located = 0; // reconciled against the image

  int attempts() const noexcept {
    return completions + touchdowns + interceptions + incompletions;
  }
};

/// Marker counts implied by a chart's metadata. Throws InconsistentMetadata
/// when any derived count would be negative.
PassCounts derive_counts(const ChartMetadata& meta);

struct PassRecord {
  std::string game_id;
  std::string team;
  std::string week;
  std::string name;
  PassOutcome pass_type = PassOutcome::Complete;
  std::optional<FieldCoordinate> coord;  // absent only for unlocated incompletions
  SeasonType season_type = SeasonType::Regular;
  std::optional<std::string> home_team;
  std::optional<std::string> away_team;
  int season = 0;
};

}  // namespace passchart
