#include "passchart/core.hpp"

#include <algorithm>
#include <cctype>

namespace passchart {

namespace {

std::string upper(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

}  // namespace

bool FieldCoordinate::within_bounds() const noexcept {
  return downfield >= -kYardsBehindScrimmage && downfield <= kMaxDownfieldYards &&
         lateral >= -kHalfFieldWidthYards && lateral <= kHalfFieldWidthYards;
}

bool FieldCoordinate::clamp_to_bounds() noexcept {
  const FieldCoordinate before = *this;
  downfield = std::clamp(downfield, -kYardsBehindScrimmage, kMaxDownfieldYards);
  lateral = std::clamp(lateral, -kHalfFieldWidthYards, kHalfFieldWidthYards);
  return !(before == *this);
}

std::string_view to_string(PassOutcome outcome) noexcept {
  switch (outcome) {
    case PassOutcome::Complete: return "COMPLETE";
    case PassOutcome::Incomplete: return "INCOMPLETE";
    case PassOutcome::Touchdown: return "TOUCHDOWN";
    case PassOutcome::Interception: return "INTERCEPTION";
  }
  return "UNKNOWN";
}

PassOutcome parse_outcome(std::string_view text) {
  const std::string key = upper(text);
  for (PassOutcome o : kAllOutcomes) {
    if (key == to_string(o)) return o;
  }
  throw Error("unknown pass outcome '" + std::string(text) + "'");
}

std::string_view to_string(SeasonType type) noexcept {
  return type == SeasonType::Post ? "post" : "reg";
}

SeasonType parse_season_type(std::string_view text) {
  const std::string key = upper(text);
  if (key == "REG") return SeasonType::Regular;
  if (key == "POST") return SeasonType::Post;
  throw Error("unknown season type '" + std::string(text) + "'");
}

std::string ChartMetadata::player_name() const {
  if (first_name.empty()) return last_name;
  if (last_name.empty()) return first_name;
  return first_name + " " + last_name;
}

PassCounts derive_counts(const ChartMetadata& meta) {
  if (meta.completions < 0 || meta.touchdowns < 0 || meta.attempts < 0 ||
      meta.interceptions < 0) {
    throw InconsistentMetadata("negative count in metadata for game " + meta.game_id);
  }
  PassCounts counts;
  counts.touchdowns = meta.touchdowns;
  counts.interceptions = meta.interceptions;
  counts.completions = meta.completions - meta.touchdowns;
  counts.incompletions =
      meta.attempts - counts.completions - counts.touchdowns - counts.interceptions;
  if (counts.completions < 0) {
    throw InconsistentMetadata("more touchdowns than completions for game " + meta.game_id);
  }
  if (counts.incompletions < 0) {
    throw InconsistentMetadata("attempts below completions plus interceptions for game " +
                               meta.game_id);
  }
  counts.incompletions_located = counts.incompletions;
  return counts;
}

}  // namespace passchart
