#include "rjcd/data_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <ostream>
#include <set>

#include "rjcd/error.hpp"

namespace rjcd {

namespace {

using namespace std::string_view_literals;

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(ParseErrorKind::kIo, path.string(), 0, "cannot open file");
  return in;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::size_t parse_rank(std::string_view field, const std::string& source, std::size_t line,
                       std::string_view what = "rank") {
  field = trim(field);
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size() || value == 0) {
    throw ParseError(ParseErrorKind::kBadField, source, line,
                     std::string(what) + " must be a positive integer, got '" +
                         std::string(field) + "'");
  }
  return value;
}

std::string require_id(std::string_view field, const std::string& source, std::size_t line,
                       std::string_view what) {
  field = trim(field);
  if (field.empty()) {
    throw ParseError(ParseErrorKind::kBadField, source, line, std::string(what) + " is empty");
  }
  return std::string(field);
}

// Loads the header + body of a CSV file, failing on an empty file.
struct Table {
  std::vector<CsvRecord> records;
  HeaderIndex header;
};

Table read_table(std::istream& in, const std::string& source,
                 std::span<const std::string_view> required, const ColumnMap& columns) {
  auto records = read_csv(in, source);
  if (records.empty()) throw ParseError(ParseErrorKind::kHeader, source, 1, "file has no header");
  HeaderIndex header(records.front(), source, required, columns);
  records.erase(records.begin());
  for (const auto& r : records) header.check_width(r);
  return {std::move(records), std::move(header)};
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

bool assessor_less(const std::string& a, const std::string& b) {
  if (all_digits(a) && all_digits(b)) {
    const auto strip = [](std::string_view s) {
      const auto first = s.find_first_not_of('0');
      return first == std::string_view::npos ? std::string_view("0") : s.substr(first);
    };
    const auto sa = strip(a);
    const auto sb = strip(b);
    if (sa.size() != sb.size()) return sa.size() < sb.size();
    if (sa != sb) return sa < sb;
  }
  return a < b;
}

// Checks that the keys of `by_rank` are exactly 1..N.
template <typename Map, typename LineOf>
void require_contiguous(const Map& by_rank, const std::string& source, const std::string& query,
                        LineOf line_of) {
  std::size_t expected = 1;
  for (const auto& [rank, value] : by_rank) {
    if (rank != expected) {
      throw ParseError(ParseErrorKind::kRankGap, source, line_of(value),
                       "query '" + query + "' jumps to rank " + std::to_string(rank) +
                           " but rank " + std::to_string(expected) + " is missing");
    }
    ++expected;
  }
}

}  // namespace

std::vector<JudgmentMatrix> read_judgments(std::istream& in, const std::string& source,
                                           const ColumnMap& columns) {
  static constexpr std::array required{"query_id"sv, "rank"sv, "assessor_id"sv, "label"sv};
  const Table table = read_table(in, source, required, columns);
  const std::size_t c_query = table.header["query_id"];
  const std::size_t c_rank = table.header["rank"];
  const std::size_t c_assessor = table.header["assessor_id"];
  const std::size_t c_label = table.header["label"];

  struct Cell {
    Label label;
    std::size_t line;
  };
  struct RankCells {
    std::size_t first_line = 0;
    std::map<std::string, Cell> by_assessor;
  };
  std::vector<std::string> query_order;
  std::map<std::string, std::map<std::size_t, RankCells>> grouped;

  for (const auto& rec : table.records) {
    const std::string query = require_id(rec.fields[c_query], source, rec.line, "query_id");
    const std::size_t rank = parse_rank(rec.fields[c_rank], source, rec.line);
    const std::string assessor =
        require_id(rec.fields[c_assessor], source, rec.line, "assessor_id");
    const std::string_view token = trim(rec.fields[c_label]);
    const auto label = parse_label(token);
    if (!label) {
      throw ParseError(ParseErrorKind::kUnknownLabel, source, rec.line,
                       "label '" + std::string(token) + "' is not one of R, P, I, N");
    }

    auto [query_it, new_query] = grouped.try_emplace(query);
    if (new_query) query_order.push_back(query);
    auto [rank_it, new_rank] = query_it->second.try_emplace(rank);
    if (new_rank) rank_it->second.first_line = rec.line;
    auto [cell_it, new_cell] = rank_it->second.by_assessor.try_emplace(assessor, Cell{*label, rec.line});
    if (!new_cell) {
      throw ParseError(ParseErrorKind::kDuplicate, source, rec.line,
                       "assessor '" + assessor + "' already judged query '" + query + "' rank " +
                           std::to_string(rank) + " on line " +
                           std::to_string(cell_it->second.line));
    }
  }

  std::vector<JudgmentMatrix> out;
  out.reserve(query_order.size());
  for (const auto& query : query_order) {
    const auto& by_rank = grouped.at(query);
    require_contiguous(by_rank, source, query, [](const RankCells& c) { return c.first_line; });

    std::set<std::string> assessor_set;
    for (const auto& [rank, cells] : by_rank) {
      for (const auto& [assessor, cell] : cells.by_assessor) assessor_set.insert(assessor);
    }
    std::vector<std::string> assessors(assessor_set.begin(), assessor_set.end());
    std::sort(assessors.begin(), assessors.end(), assessor_less);

    std::vector<std::vector<Label>> rows;
    rows.reserve(by_rank.size());
    for (const auto& [rank, cells] : by_rank) {
      std::vector<Label> row;
      row.reserve(assessors.size());
      for (const auto& assessor : assessors) {
        auto it = cells.by_assessor.find(assessor);
        if (it == cells.by_assessor.end()) {
          throw ParseError(ParseErrorKind::kMissingCell, source, cells.first_line,
                           "query '" + query + "' rank " + std::to_string(rank) +
                               " has no judgment from assessor '" + assessor + "'");
        }
        row.push_back(it->second.label);
      }
      rows.push_back(std::move(row));
    }
    out.emplace_back(query, std::move(assessors), std::move(rows));
  }
  return out;
}

std::vector<JudgmentMatrix> load_judgments(const std::filesystem::path& path,
                                           const ColumnMap& columns) {
  auto in = open_input(path);
  return read_judgments(in, path.string(), columns);
}

void write_judgments(std::ostream& out, std::span<const JudgmentMatrix> matrices) {
  out << "query_id,rank,assessor_id,label\n";
  for (const auto& m : matrices) {
    for (std::size_t rank = 1; rank <= m.item_count(); ++rank) {
      const auto row = m.row(rank);
      for (std::size_t j = 0; j < m.assessor_count(); ++j) {
        const std::array<std::string, 4> fields{m.query_id(), std::to_string(rank),
                                                m.assessors()[j], std::string(1, to_char(row[j]))};
        write_csv_row(out, fields);
      }
    }
  }
}

std::vector<SnippetList> read_snippets(std::istream& in, const std::string& source,
                                       const ColumnMap& columns) {
  static constexpr std::array required{"query_id"sv, "rank"sv, "title"sv, "snippet"sv, "url"sv};
  const Table table = read_table(in, source, required, columns);
  const std::size_t c_query = table.header["query_id"];
  const std::size_t c_rank = table.header["rank"];
  const std::size_t c_title = table.header["title"];
  const std::size_t c_snippet = table.header["snippet"];
  const std::size_t c_url = table.header["url"];

  std::vector<std::string> query_order;
  std::map<std::string, std::map<std::size_t, std::pair<Snippet, std::size_t>>> grouped;
  for (const auto& rec : table.records) {
    Snippet s;
    s.query_id = require_id(rec.fields[c_query], source, rec.line, "query_id");
    s.rank = parse_rank(rec.fields[c_rank], source, rec.line);
    s.title = rec.fields[c_title];
    s.summary = rec.fields[c_snippet];
    s.url = rec.fields[c_url];
    if (trim(s.title).empty() && trim(s.summary).empty()) {
      throw ParseError(ParseErrorKind::kBadField, source, rec.line,
                       "snippet has neither title nor text");
    }
    auto [query_it, new_query] = grouped.try_emplace(s.query_id);
    if (new_query) query_order.push_back(s.query_id);
    const std::size_t rank = s.rank;
    auto [it, inserted] = query_it->second.try_emplace(rank, std::move(s), rec.line);
    if (!inserted) {
      throw ParseError(ParseErrorKind::kDuplicate, source, rec.line,
                       "rank " + std::to_string(rank) + " of query '" + query_it->first +
                           "' already given on line " + std::to_string(it->second.second));
    }
  }

  std::vector<SnippetList> out;
  for (const auto& query : query_order) {
    auto& by_rank = grouped.at(query);
    require_contiguous(by_rank, source, query, [](const auto& entry) { return entry.second; });
    SnippetList list{query, {}};
    list.snippets.reserve(by_rank.size());
    for (auto& [rank, entry] : by_rank) list.snippets.push_back(std::move(entry.first));
    out.push_back(std::move(list));
  }
  return out;
}

std::vector<SnippetList> load_snippets(const std::filesystem::path& path,
                                       const ColumnMap& columns) {
  auto in = open_input(path);
  return read_snippets(in, path.string(), columns);
}

void write_snippets(std::ostream& out, std::span<const SnippetList> lists) {
  out << "query_id,rank,title,snippet,url\n";
  for (const auto& list : lists) {
    for (const auto& s : list.snippets) {
      const std::array<std::string, 5> fields{s.query_id, std::to_string(s.rank), s.title,
                                              s.summary, s.url};
      write_csv_row(out, fields);
    }
  }
}

std::string_view to_string(QueryCategory category) noexcept {
  switch (category) {
    case QueryCategory::kAmbiguous: return "Ambiguous";
    case QueryCategory::kEntity: return "Entity";
    case QueryCategory::kGeneral: return "General";
  }
  return "General";
}

std::optional<QueryCategory> parse_query_category(std::string_view name) noexcept {
  if (name == "Ambiguous") return QueryCategory::kAmbiguous;
  if (name == "Entity") return QueryCategory::kEntity;
  if (name == "General") return QueryCategory::kGeneral;
  return std::nullopt;
}

std::vector<QueryRecord> load_queries(const std::filesystem::path& path,
                                      const ColumnMap& columns) {
  static constexpr std::array required{"query"sv, "info_need"sv, "category"sv};
  auto in = open_input(path);
  const std::string source = path.string();
  const Table table = read_table(in, source, required, columns);

  std::vector<QueryRecord> out;
  std::set<std::string> seen;
  for (const auto& rec : table.records) {
    QueryRecord q;
    q.query = require_id(rec.fields[table.header["query"]], source, rec.line, "query");
    q.information_need = rec.fields[table.header["info_need"]];
    const auto category_name = trim(rec.fields[table.header["category"]]);
    const auto category = parse_query_category(category_name);
    if (!category) {
      throw ParseError(ParseErrorKind::kBadField, source, rec.line,
                       "category '" + std::string(category_name) +
                           "' is not Ambiguous, Entity or General");
    }
    q.category = *category;
    if (!seen.insert(q.query).second) {
      throw ParseError(ParseErrorKind::kDuplicate, source, rec.line,
                       "query '" + q.query + "' listed twice");
    }
    out.push_back(std::move(q));
  }
  return out;
}

TieOverrides load_overrides(const std::filesystem::path& path, const ColumnMap& columns) {
  static constexpr std::array required{"query_id"sv, "rank"sv, "verdict"sv};
  auto in = open_input(path);
  const std::string source = path.string();
  const Table table = read_table(in, source, required, columns);

  TieOverrides overrides;
  for (const auto& rec : table.records) {
    const std::string query =
        require_id(rec.fields[table.header["query_id"]], source, rec.line, "query_id");
    const std::size_t rank = parse_rank(rec.fields[table.header["rank"]], source, rec.line);
    const auto word = trim(rec.fields[table.header["verdict"]]);
    Verdict verdict;
    if (word == "relevant") {
      verdict = Verdict::kRelevant;
    } else if (word == "irrelevant") {
      verdict = Verdict::kIrrelevant;
    } else {
      throw ParseError(ParseErrorKind::kBadField, source, rec.line,
                       "verdict '" + std::string(word) + "' is not relevant or irrelevant");
    }
    if (overrides.find(query, rank)) {
      throw ParseError(ParseErrorKind::kDuplicate, source, rec.line,
                       "override for query '" + query + "' rank " + std::to_string(rank) +
                           " given twice");
    }
    overrides.set(query, rank, verdict);
  }
  return overrides;
}

std::map<std::string, PreferenceProfile> load_profiles(const std::filesystem::path& path,
                                                       const ColumnMap& columns) {
  static constexpr std::array required{"query_id"sv, "topic1"sv, "topic2"sv};
  auto in = open_input(path);
  const std::string source = path.string();
  const Table table = read_table(in, source, required, columns);

  std::map<std::string, PreferenceProfile> out;
  for (const auto& rec : table.records) {
    const std::string query =
        require_id(rec.fields[table.header["query_id"]], source, rec.line, "query_id");
    std::array<OdpTopic, 2> topics{};
    for (std::size_t i = 0; i < 2; ++i) {
      const auto name = trim(rec.fields[table.header[i == 0 ? "topic1" : "topic2"]]);
      const auto topic = parse_topic(name);
      if (!topic) {
        throw ParseError(ParseErrorKind::kUnknownTopic, source, rec.line,
                         "'" + std::string(name) + "' is not a top-level ODP topic");
      }
      topics[i] = *topic;
    }
    if (topics[0] == topics[1]) {
      throw ParseError(ParseErrorKind::kBadField, source, rec.line,
                       "profile needs two different topics");
    }
    if (!out.try_emplace(query, topics[0], topics[1]).second) {
      throw ParseError(ParseErrorKind::kDuplicate, source, rec.line,
                       "profile for query '" + query + "' given twice");
    }
  }
  return out;
}

std::vector<LabeledDoc> load_corpus(const std::filesystem::path& path) {
  auto in = open_input(path);
  const std::string source = path.string();
  std::vector<LabeledDoc> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ParseError(ParseErrorKind::kMalformedRecord, source, line_no,
                       "expected topic<TAB>text");
    }
    const auto name = trim(std::string_view(line).substr(0, tab));
    const auto topic = parse_topic(name);
    if (!topic) {
      throw ParseError(ParseErrorKind::kUnknownTopic, source, line_no,
                       "'" + std::string(name) + "' is not a top-level ODP topic");
    }
    docs.push_back({*topic, line.substr(tab + 1)});
  }
  return docs;
}

std::map<std::string, std::vector<std::size_t>> load_rerank_run(
    const std::filesystem::path& path, const ColumnMap& columns) {
  static constexpr std::array required{"query_id"sv, "new_rank"sv, "original_rank"sv, "topic"sv};
  auto in = open_input(path);
  const std::string source = path.string();
  const Table table = read_table(in, source, required, columns);

  std::map<std::string, std::map<std::size_t, std::pair<std::size_t, std::size_t>>> grouped;
  for (const auto& rec : table.records) {
    const std::string query =
        require_id(rec.fields[table.header["query_id"]], source, rec.line, "query_id");
    const std::size_t new_rank =
        parse_rank(rec.fields[table.header["new_rank"]], source, rec.line, "new_rank");
    const std::size_t original =
        parse_rank(rec.fields[table.header["original_rank"]], source, rec.line, "original_rank");
    const auto topic_name_field = trim(rec.fields[table.header["topic"]]);
    if (!parse_topic(topic_name_field)) {
      throw ParseError(ParseErrorKind::kUnknownTopic, source, rec.line,
                       "'" + std::string(topic_name_field) + "' is not a top-level ODP topic");
    }
    if (!grouped[query].try_emplace(new_rank, original, rec.line).second) {
      throw ParseError(ParseErrorKind::kDuplicate, source, rec.line,
                       "new_rank " + std::to_string(new_rank) + " of query '" + query +
                           "' given twice");
    }
  }

  std::map<std::string, std::vector<std::size_t>> out;
  for (const auto& [query, by_rank] : grouped) {
    require_contiguous(by_rank, source, query, [](const auto& entry) { return entry.second; });
    std::vector<std::size_t> order;
    std::set<std::size_t> seen;
    for (const auto& [new_rank, entry] : by_rank) {
      const auto [original, line] = entry;
      if (original > by_rank.size() || !seen.insert(original).second) {
        throw ParseError(ParseErrorKind::kBadField, source, line,
                         "original ranks of query '" + query + "' are not a permutation of 1.." +
                             std::to_string(by_rank.size()));
      }
      order.push_back(original);
    }
    out.emplace(query, std::move(order));
  }
  return out;
}

void write_rerank_header(std::ostream& out) { out << "query_id,new_rank,original_rank,topic\n"; }

void write_rerank_rows(std::ostream& out, const std::string& query_id,
                       std::span<const RerankedItem> items) {
  for (const auto& item : items) {
    const std::array<std::string, 4> fields{query_id, std::to_string(item.new_rank),
                                            std::to_string(item.original_rank),
                                            std::string(topic_name(item.topic))};
    write_csv_row(out, fields);
  }
}

void check_dataset(const Dataset& dataset) {
  std::map<std::string, std::size_t> snippet_counts;
  for (const auto& list : dataset.snippets) snippet_counts[list.query_id] = list.snippets.size();
  std::set<std::string> listed;
  for (const auto& q : dataset.queries) listed.insert(q.query);
  std::map<std::string, std::size_t> judged;

  for (const auto& m : dataset.judgments) {
    judged[m.query_id()] = m.item_count();
    if (!dataset.queries.empty() && !listed.contains(m.query_id())) {
      throw InvalidInput("judged query '" + m.query_id() + "' is not in the query list");
    }
    if (dataset.snippets.empty()) continue;
    auto it = snippet_counts.find(m.query_id());
    if (it == snippet_counts.end()) {
      throw InvalidInput("judged query '" + m.query_id() + "' has no snippets");
    }
    if (m.item_count() > it->second) {
      throw InvalidInput("query '" + m.query_id() + "' has judgments up to rank " +
                         std::to_string(m.item_count()) + " but only " +
                         std::to_string(it->second) + " snippets");
    }
  }
  for (const auto& [key, verdict] : dataset.overrides.entries()) {
    auto it = judged.find(key.first);
    if (it == judged.end() || key.second > it->second) {
      throw InvalidInput("override for query '" + key.first + "' rank " +
                         std::to_string(key.second) + " does not match a judged item");
    }
  }
}

}  // namespace rjcd
