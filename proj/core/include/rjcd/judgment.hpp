#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rjcd {

// Graded judgment an assessor gives one snippet: relevant, partially
// relevant, irrelevant, or not enough information in the snippet.
enum class Label : std::uint8_t { R = 0, P = 1, I = 2, N = 3 };

inline constexpr std::size_t kLabelCount = 4;
inline constexpr std::array<Label, kLabelCount> kAllLabels{Label::R, Label::P,
                                                          Label::I, Label::N};

// R=+3, P=+1, I=-3, N=0. These are the values that reproduce every summed
// score of the published "resume" judgment table.
constexpr int score_of(Label label) noexcept {
  switch (label) {
    case Label::R: return 3;
    case Label::P: return 1;
    case Label::I: return -3;
    case Label::N: return 0;
  }
  return 0;
}

char to_char(Label label) noexcept;

// Case-sensitive; accepts exactly "R", "P", "I" or "N".
std::optional<Label> parse_label(std::string_view token) noexcept;

// N items x h assessors for one query. Row i holds the judgments for the item
// at rank i + 1, so ranks are 1..N by construction.
class JudgmentMatrix {
 public:
  // Throws InvalidInput unless rows is non-empty, every row has exactly
  // assessors.size() labels and there is at least one assessor. An empty
  // assessor list is replaced by "1".."h" taken from the first row.
  JudgmentMatrix(std::string query_id, std::vector<std::string> assessors,
                 std::vector<std::vector<Label>> rows);

  const std::string& query_id() const noexcept { return query_id_; }
  const std::vector<std::string>& assessors() const noexcept { return assessors_; }
  std::size_t assessor_count() const noexcept { return assessors_.size(); }
  std::size_t item_count() const noexcept { return rows_.size(); }

  // 1-based rank.
  std::span<const Label> row(std::size_t rank) const;
  const std::vector<std::vector<Label>>& rows() const noexcept { return rows_; }

  friend bool operator==(const JudgmentMatrix&, const JudgmentMatrix&) = default;

 private:
  std::string query_id_;
  std::vector<std::string> assessors_;
  std::vector<std::vector<Label>> rows_;
};

enum class Verdict : std::uint8_t { kRelevant, kIrrelevant, kUnresolved };

const char* to_string(Verdict verdict) noexcept;

struct ItemVerdict {
  std::size_t rank = 0;
  int score_sum = 0;
  Verdict verdict = Verdict::kUnresolved;

  friend bool operator==(const ItemVerdict&, const ItemVerdict&) = default;
};

// Manual decisions for zero-score items, keyed by (query_id, rank).
class TieOverrides {
 public:
  // Throws InvalidInput if verdict is kUnresolved.
  void set(const std::string& query_id, std::size_t rank, Verdict verdict);
  std::optional<Verdict> find(const std::string& query_id, std::size_t rank) const;
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  const std::map<std::pair<std::string, std::size_t>, Verdict>& entries() const noexcept {
    return entries_;
  }

 private:
  std::map<std::pair<std::string, std::size_t>, Verdict> entries_;
};

// Sum of score_of over the row. Throws InvalidInput on an empty row.
int sum_scores(std::span<const Label> row);

// s > 0 -> relevant, s < 0 -> irrelevant, s == 0 -> the override if any,
// otherwise kUnresolved. The override is ignored for non-zero sums.
Verdict binary_verdict(int score_sum, std::optional<Verdict> tie_override = std::nullopt);

std::vector<ItemVerdict> item_verdicts(const JudgmentMatrix& matrix,
                                       const TieOverrides& overrides = {});

// Number of distinct labels in the row, in [1, min(h, 4)].
int gamma(std::span<const Label> row);

struct RjcdReport {
  std::string query_id;
  std::size_t agreement_number = 0;  // AN: rows where every assessor agrees
  std::size_t judgment_number = 0;   // JN: sum of gamma over rows
  double rho = 0.0;                  // AN / JN
  std::vector<int> gammas;           // per rank, index 0 = rank 1

  friend bool operator==(const RjcdReport&, const RjcdReport&) = default;
};

// Relevance judgment convergence degree of one query.
RjcdReport rjcd(const JudgmentMatrix& matrix);

struct Qrels {
  std::string query_id;
  std::vector<bool> relevant;  // index 0 = rank 1
  std::size_t total_relevant = 0;
};

// Binary ground truth per rank. Throws UnresolvedTies listing every zero-score
// item that has no override.
Qrels qrels_from_judgments(const JudgmentMatrix& matrix, const TieOverrides& overrides = {});

// Fleiss' kappa over the four-label category space. Requires h >= 2. When
// chance agreement is 1 (every judgment uses one label) the result is 1.
double fleiss_kappa(const JudgmentMatrix& matrix);

// Jaccard overlap of the items two assessors (0-based column indices) mark R
// or P. Two empty sets give 1.
double jaccard_agreement(const JudgmentMatrix& matrix, std::size_t a, std::size_t b);

}  // namespace rjcd
