#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rjcd {

struct CsvRecord {
  std::size_t line = 0;  // line on which the record starts
  std::vector<std::string> fields;
};

// RFC 4180 reader: quoted fields may hold delimiters, doubled quotes and
// newlines; CRLF is accepted; blank lines are skipped. Throws ParseError
// (kMalformedRecord) naming `source` and the line on a malformed quote.
std::vector<CsvRecord> read_csv(std::istream& in, const std::string& source, char delimiter = ',');

// Quotes the field when it holds the delimiter, a quote, CR/LF or
// leading/trailing spaces.
std::string csv_escape(std::string_view field, char delimiter = ',');

void write_csv_row(std::ostream& out, std::span<const std::string> fields, char delimiter = ',');

// Canonical column name -> name used in the file's header.
using ColumnMap = std::map<std::string, std::string, std::less<>>;

// Parses "canonical=actual,canonical=actual". Throws InvalidInput.
ColumnMap parse_column_map(std::string_view spec);

// Resolves required columns in a header record.
class HeaderIndex {
 public:
  // Throws ParseError(kHeader) if a required column is missing or repeated.
  HeaderIndex(const CsvRecord& header, const std::string& source,
              std::span<const std::string_view> required, const ColumnMap& columns = {});

  std::size_t operator[](std::string_view canonical) const;
  std::size_t width() const noexcept { return width_; }

  // Throws ParseError(kMalformedRecord) when the record's field count differs
  // from the header's.
  void check_width(const CsvRecord& record) const;

 private:
  std::string source_;
  std::size_t width_ = 0;
  std::map<std::string, std::size_t, std::less<>> positions_;
};

}  // namespace rjcd
