#include "rjcd/error.hpp"

namespace rjcd {

namespace {

std::string describe_ties(const std::vector<UnresolvedTies::Item>& items) {
  std::string msg = std::to_string(items.size()) + " unresolved tie(s) (score 0, no override):";
  for (const auto& item : items) {
    msg += " (" + item.query_id + ", " + std::to_string(item.rank) + ")";
  }
  return msg;
}

std::string describe_parse(ParseErrorKind kind, const std::string& file, std::size_t line,
                           const std::string& detail) {
  std::string where = file;
  if (line > 0) where += ":" + std::to_string(line);
  return where + ": " + to_string(kind) + ": " + detail;
}

}  // namespace

UnresolvedTies::UnresolvedTies(std::vector<Item> items)
    : std::runtime_error(describe_ties(items)), items_(std::move(items)) {}

const char* to_string(ParseErrorKind kind) noexcept {
  switch (kind) {
    case ParseErrorKind::kIo: return "io error";
    case ParseErrorKind::kHeader: return "bad header";
    case ParseErrorKind::kMalformedRecord: return "malformed record";
    case ParseErrorKind::kBadField: return "bad field";
    case ParseErrorKind::kUnknownLabel: return "unknown label";
    case ParseErrorKind::kUnknownTopic: return "unknown topic";
    case ParseErrorKind::kDuplicate: return "duplicate";
    case ParseErrorKind::kMissingCell: return "missing cell";
    case ParseErrorKind::kRankGap: return "rank gap";
  }
  return "parse error";
}

ParseError::ParseError(ParseErrorKind kind, std::string file, std::size_t line,
                       const std::string& detail)
    : std::runtime_error(describe_parse(kind, file, line, detail)),
      kind_(kind),
      file_(std::move(file)),
      line_(line) {}

}  // namespace rjcd
