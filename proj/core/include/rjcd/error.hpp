#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rjcd {

// Precondition violated by caller-supplied data (empty rows, bad indices...).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A ratio metric whose denominator is zero.
class UndefinedMetric : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Numerically degenerate input, e.g. a constant series fed to a correlation.
class NumericError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Items whose summed score is zero and that have no manual override.
class UnresolvedTies : public std::runtime_error {
 public:
  struct Item {
    std::string query_id;
    std::size_t rank;
  };

  explicit UnresolvedTies(std::vector<Item> items);

  const std::vector<Item>& items() const noexcept { return items_; }

 private:
  std::vector<Item> items_;
};

enum class ParseErrorKind {
  kIo,
  kHeader,
  kMalformedRecord,
  kBadField,
  kUnknownLabel,
  kUnknownTopic,
  kDuplicate,
  kMissingCell,
  kRankGap,
};

const char* to_string(ParseErrorKind kind) noexcept;

// Input file problem. what() is "<file>:<line>: <kind>: <detail>"; line 0
// means the error is not tied to a single line (e.g. the file is missing).
class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrorKind kind, std::string file, std::size_t line,
             const std::string& detail);

  ParseErrorKind kind() const noexcept { return kind_; }
  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }

 private:
  ParseErrorKind kind_;
  std::string file_;
  std::size_t line_;
};

}  // namespace rjcd
