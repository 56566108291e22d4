#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rjcd/csv.hpp"
#include "rjcd/judgment.hpp"
#include "rjcd/reranker.hpp"

namespace rjcd {

// Loaders look columns up by header name; `columns` renames canonical
// columns for files that use a different header. Every loader throws
// ParseError carrying the file name and line number.

// judgments.csv: query_id,rank,assessor_id,label
// Queries come back in order of first appearance; assessor columns are
// sorted by id (numerically when both ids are digits).
std::vector<JudgmentMatrix> read_judgments(std::istream& in, const std::string& source,
                                           const ColumnMap& columns = {});
std::vector<JudgmentMatrix> load_judgments(const std::filesystem::path& path,
                                           const ColumnMap& columns = {});
void write_judgments(std::ostream& out, std::span<const JudgmentMatrix> matrices);

struct SnippetList {
  std::string query_id;
  std::vector<Snippet> snippets;  // sorted by rank, ranks 1..N

  friend bool operator==(const SnippetList&, const SnippetList&) = default;
};

// snippets.csv: query_id,rank,title,snippet,url
std::vector<SnippetList> read_snippets(std::istream& in, const std::string& source,
                                       const ColumnMap& columns = {});
std::vector<SnippetList> load_snippets(const std::filesystem::path& path,
                                       const ColumnMap& columns = {});
void write_snippets(std::ostream& out, std::span<const SnippetList> lists);

enum class QueryCategory { kAmbiguous, kEntity, kGeneral };
std::string_view to_string(QueryCategory category) noexcept;
std::optional<QueryCategory> parse_query_category(std::string_view name) noexcept;

struct QueryRecord {
  std::string query;
  std::string information_need;
  QueryCategory category = QueryCategory::kGeneral;
};

// queries.csv: query,info_need,category
std::vector<QueryRecord> load_queries(const std::filesystem::path& path,
                                      const ColumnMap& columns = {});

// overrides.csv: query_id,rank,verdict (relevant|irrelevant)
TieOverrides load_overrides(const std::filesystem::path& path, const ColumnMap& columns = {});

// profiles.csv: query_id,topic1,topic2
std::map<std::string, PreferenceProfile> load_profiles(const std::filesystem::path& path,
                                                       const ColumnMap& columns = {});

// corpus.tsv: topic<TAB>text, no header; lines starting with '#' are comments.
std::vector<LabeledDoc> load_corpus(const std::filesystem::path& path);

// reranked.csv: query_id,new_rank,original_rank,topic. Returns, per query,
// the original ranks in new-rank order.
std::map<std::string, std::vector<std::size_t>> load_rerank_run(
    const std::filesystem::path& path, const ColumnMap& columns = {});
void write_rerank_header(std::ostream& out);
void write_rerank_rows(std::ostream& out, const std::string& query_id,
                       std::span<const RerankedItem> items);

struct Dataset {
  std::vector<QueryRecord> queries;
  std::vector<SnippetList> snippets;
  std::vector<JudgmentMatrix> judgments;
  TieOverrides overrides;
};

// Cross-file consistency: every judged (query, rank) must have a snippet when
// snippets are present, every judged query must be listed when queries are
// present, and every override must point at a judged item. Throws
// InvalidInput.
void check_dataset(const Dataset& dataset);

}  // namespace rjcd
