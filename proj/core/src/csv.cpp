#include "rjcd/csv.hpp"

#include <istream>
#include <iterator>
#include <ostream>

#include "rjcd/error.hpp"

namespace rjcd {

std::vector<CsvRecord> read_csv(std::istream& in, const std::string& source, char delimiter) {
  const std::string data{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  std::vector<CsvRecord> records;

  std::size_t line = 1;
  std::size_t i = 0;
  const std::size_t n = data.size();
  // Skip a UTF-8 byte order mark.
  if (data.starts_with("\xEF\xBB\xBF")) i = 3;

  while (i < n) {
    if (data[i] == '\n' || data[i] == '\r') {
      if (data[i] == '\r' && i + 1 < n && data[i + 1] == '\n') ++i;
      ++i;
      ++line;
      continue;
    }

    CsvRecord record;
    record.line = line;
    std::string field;
    bool end_of_record = false;
    while (!end_of_record) {
      field.clear();
      if (i < n && data[i] == '"') {
        ++i;
        bool closed = false;
        while (i < n) {
          const char c = data[i];
          if (c == '"') {
            if (i + 1 < n && data[i + 1] == '"') {
              field.push_back('"');
              i += 2;
              continue;
            }
            ++i;
            closed = true;
            break;
          }
          if (c == '\n') ++line;
          field.push_back(c);
          ++i;
        }
        if (!closed) {
          throw ParseError(ParseErrorKind::kMalformedRecord, source, record.line,
                           "unterminated quoted field");
        }
        if (i < n && data[i] != delimiter && data[i] != '\n' && data[i] != '\r') {
          throw ParseError(ParseErrorKind::kMalformedRecord, source, line,
                           "unexpected character after closing quote");
        }
      } else {
        while (i < n && data[i] != delimiter && data[i] != '\n' && data[i] != '\r') {
          if (data[i] == '"') {
            throw ParseError(ParseErrorKind::kMalformedRecord, source, line,
                             "quote inside unquoted field");
          }
          field.push_back(data[i]);
          ++i;
        }
      }
      record.fields.push_back(field);

      if (i < n && data[i] == delimiter) {
        ++i;
      } else {
        end_of_record = true;
        if (i < n && data[i] == '\r') ++i;
        if (i < n && data[i] == '\n') ++i;
        ++line;
      }
    }
    records.push_back(std::move(record));
  }
  return records;
}

std::string csv_escape(std::string_view field, char delimiter) {
  const bool needs_quotes = field.find_first_of(std::string{delimiter, '"', '\n', '\r'}) !=
                                std::string_view::npos ||
                            (!field.empty() && (field.front() == ' ' || field.back() == ' '));
  if (!needs_quotes) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_csv_row(std::ostream& out, std::span<const std::string> fields, char delimiter) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out << delimiter;
    out << csv_escape(fields[i], delimiter);
  }
  out << '\n';
}

namespace {

std::string_view strip_spaces(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  return s;
}

}  // namespace

ColumnMap parse_column_map(std::string_view spec) {
  ColumnMap map;
  while (!spec.empty()) {
    const auto comma = spec.find(',');
    const std::string_view item = spec.substr(0, comma);
    const auto eq = item.find('=');
    const std::string_view key = eq == std::string_view::npos ? item : strip_spaces(item.substr(0, eq));
    const std::string_view value =
        eq == std::string_view::npos ? std::string_view{} : strip_spaces(item.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw InvalidInput("bad column mapping '" + std::string(item) +
                         "', expected canonical=actual");
    }
    map.emplace(std::string(key), std::string(value));
    if (comma == std::string_view::npos) break;
    spec.remove_prefix(comma + 1);
  }
  return map;
}

HeaderIndex::HeaderIndex(const CsvRecord& header, const std::string& source,
                         std::span<const std::string_view> required, const ColumnMap& columns)
    : source_(source), width_(header.fields.size()) {
  for (std::string_view canonical : required) {
    std::string actual(canonical);
    if (auto it = columns.find(canonical); it != columns.end()) actual = it->second;
    std::size_t found = header.fields.size();
    for (std::size_t i = 0; i < header.fields.size(); ++i) {
      if (header.fields[i] != actual) continue;
      if (found != header.fields.size()) {
        throw ParseError(ParseErrorKind::kHeader, source, header.line,
                         "column '" + actual + "' appears more than once");
      }
      found = i;
    }
    if (found == header.fields.size()) {
      throw ParseError(ParseErrorKind::kHeader, source, header.line,
                       "missing column '" + actual + "'");
    }
    positions_.emplace(std::string(canonical), found);
  }
}

std::size_t HeaderIndex::operator[](std::string_view canonical) const {
  return positions_.at(std::string(canonical));
}

void HeaderIndex::check_width(const CsvRecord& record) const {
  if (record.fields.size() != width_) {
    throw ParseError(ParseErrorKind::kMalformedRecord, source_, record.line,
                     "expected " + std::to_string(width_) + " fields, found " +
                         std::to_string(record.fields.size()));
  }
}

}  // namespace rjcd
