#include "passchart/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

namespace passchart {

namespace {

constexpr std::string_view kMissing = "NA";

bool needs_quotes(std::string_view field) {
  return field.find_first_of(",\"\r\n") != std::string_view::npos;
}

double parse_double(const std::string& text) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) throw Error("not a number: '" + text + "'");
  return value;
}

int parse_int(const std::string& text) {
  int value = 0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) throw Error("not an integer: '" + text + "'");
  return value;
}

std::optional<std::string> optional_text(const std::string& text) {
  if (text.empty() || text == kMissing) return std::nullopt;
  return text;
}

}  // namespace

bool CsvReader::next(CsvRow& row) {
  row.clear();
  std::string field;
  bool in_quotes = false;
  bool any = false;
  int c;
  while ((c = in_.get()) != EOF) {
    any = true;
    const char ch = static_cast<char>(c);
    if (in_quotes) {
      if (ch == '"') {
        if (in_.peek() == '"') {
          in_.get();
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        if (ch == '\n') ++line_;
        field.push_back(ch);
      }
      continue;
    }
    if (ch == '"') {
      in_quotes = true;
    } else if (ch == ',') {
      row.push_back(std::move(field));
      field.clear();
    } else if (ch == '\n') {
      ++line_;
      row.push_back(std::move(field));
      return true;
    } else if (ch != '\r') {
      field.push_back(ch);
    }
  }
  if (!any) return false;
  ++line_;
  row.push_back(std::move(field));
  return true;
}

void write_csv_row(std::ostream& out, const CsvRow& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out << ',';
    if (needs_quotes(row[i])) {
      out << '"';
      for (char c : row[i]) {
        if (c == '"') out << '"';
        out << c;
      }
      out << '"';
    } else {
      out << row[i];
    }
  }
  out << '\n';
}

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", value);
  std::string text(buf);
  if (text == "-0.00") text = "0.00";
  return text;
}

void write_pass_records(std::ostream& out, const std::vector<PassRecord>& records) {
  write_csv_row(out, CsvRow(std::begin(kPassRecordColumns), std::end(kPassRecordColumns)));
  for (const PassRecord& r : records) {
    CsvRow row;
    row.reserve(std::size(kPassRecordColumns));
    row.push_back(r.game_id);
    row.push_back(r.team);
    row.push_back(r.week);
    row.push_back(r.name);
    row.emplace_back(to_string(r.pass_type));
    row.push_back(r.coord ? format_number(r.coord->lateral) : std::string(kMissing));
    row.push_back(r.coord ? format_number(r.coord->downfield) : std::string(kMissing));
    row.emplace_back(to_string(r.season_type));
    row.push_back(r.home_team.value_or(std::string(kMissing)));
    row.push_back(r.away_team.value_or(std::string(kMissing)));
    row.push_back(std::to_string(r.season));
    write_csv_row(out, row);
  }
}

void write_pass_records(const std::filesystem::path& path,
                        const std::vector<PassRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  write_pass_records(out, records);
}

PassRecordTable read_pass_records(std::istream& in) {
  PassRecordTable table;
  CsvReader reader(in);
  CsvRow header;
  if (!reader.next(header)) return table;
  if (header.size() != std::size(kPassRecordColumns)) {
    throw Error("pass-record CSV header has " + std::to_string(header.size()) +
                " columns, expected " + std::to_string(std::size(kPassRecordColumns)));
  }
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] != kPassRecordColumns[i]) {
      throw Error("pass-record CSV column " + std::to_string(i) + " is '" + header[i] +
                  "', expected '" + std::string(kPassRecordColumns[i]) + "'");
    }
  }
  CsvRow row;
  while (reader.next(row)) {
    if (row.size() == 1 && row[0].empty()) continue;
    try {
      if (row.size() != header.size()) throw Error("wrong column count");
      PassRecord r;
      r.game_id = row[0];
      r.team = row[1];
      r.week = row[2];
      r.name = row[3];
      r.pass_type = parse_outcome(row[4]);
      const bool missing_x = row[5].empty() || row[5] == kMissing;
      const bool missing_y = row[6].empty() || row[6] == kMissing;
      if (missing_x != missing_y) throw Error("half-missing coordinate");
      if (!missing_x) r.coord = FieldCoordinate{parse_double(row[6]), parse_double(row[5])};
      r.season_type = parse_season_type(row[7]);
      r.home_team = optional_text(row[8]);
      r.away_team = optional_text(row[9]);
      r.season = parse_int(row[10]);
      table.records.push_back(std::move(r));
    } catch (const Error& e) {
      table.warnings.push_back("line " + std::to_string(reader.line()) + ": " + e.what());
    }
  }
  return table;
}

PassRecordTable read_pass_records(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  return read_pass_records(in);
}

}  // namespace passchart
