#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "passchart/core.hpp"

namespace passchart {

using CsvRow = std::vector<std::string>;

/// Minimal RFC 4180 reader: quoted fields, doubled quotes, CRLF tolerated.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : in_(in) {}
  bool next(CsvRow& row);
  std::size_t line() const noexcept { return line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
};

void write_csv_row(std::ostream& out, const CsvRow& row);

/// Fixed two-decimal rendering used by every CSV the toolkit writes.
std::string format_number(double value);

/// Column order of the pass-record table.
inline constexpr std::string_view kPassRecordColumns[] = {
    "game_id", "team", "week", "name", "pass_type", "x_coord",
    "y_coord", "type", "home_team", "away_team", "season"};

// The x_coord column carries the lateral position and y_coord the downfield
// position, matching the published sample table's axes.
void write_pass_records(std::ostream& out, const std::vector<PassRecord>& records);
void write_pass_records(const std::filesystem::path& path,
                        const std::vector<PassRecord>& records);

struct PassRecordTable {
  std::vector<PassRecord> records;
  std::vector<std::string> warnings;  // malformed rows skipped
};

PassRecordTable read_pass_records(std::istream& in);
PassRecordTable read_pass_records(const std::filesystem::path& path);

}  // namespace passchart
