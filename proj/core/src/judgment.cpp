#include "rjcd/judgment.hpp"

#include <algorithm>
#include <bitset>

#include "rjcd/error.hpp"

namespace rjcd {

char to_char(Label label) noexcept {
  switch (label) {
    case Label::R: return 'R';
    case Label::P: return 'P';
    case Label::I: return 'I';
    case Label::N: return 'N';
  }
  return '?';
}

std::optional<Label> parse_label(std::string_view token) noexcept {
  if (token.size() != 1) return std::nullopt;
  switch (token.front()) {
    case 'R': return Label::R;
    case 'P': return Label::P;
    case 'I': return Label::I;
    case 'N': return Label::N;
    default: return std::nullopt;
  }
}

JudgmentMatrix::JudgmentMatrix(std::string query_id, std::vector<std::string> assessors,
                               std::vector<std::vector<Label>> rows)
    : query_id_(std::move(query_id)), assessors_(std::move(assessors)), rows_(std::move(rows)) {
  if (rows_.empty()) {
    throw InvalidInput("judgment matrix for query '" + query_id_ + "' has no items");
  }
  if (assessors_.empty()) {
    for (std::size_t j = 0; j < rows_.front().size(); ++j) {
      assessors_.push_back(std::to_string(j + 1));
    }
  }
  if (assessors_.empty()) {
    throw InvalidInput("judgment matrix for query '" + query_id_ + "' has no assessors");
  }
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i].size() != assessors_.size()) {
      throw InvalidInput("query '" + query_id_ + "' rank " + std::to_string(i + 1) + " has " +
                         std::to_string(rows_[i].size()) + " judgments, expected " +
                         std::to_string(assessors_.size()));
    }
  }
}

std::span<const Label> JudgmentMatrix::row(std::size_t rank) const {
  if (rank == 0 || rank > rows_.size()) {
    throw InvalidInput("rank " + std::to_string(rank) + " out of range 1.." +
                       std::to_string(rows_.size()));
  }
  return rows_[rank - 1];
}

const char* to_string(Verdict verdict) noexcept {
  switch (verdict) {
    case Verdict::kRelevant: return "relevant";
    case Verdict::kIrrelevant: return "irrelevant";
    case Verdict::kUnresolved: return "unresolved";
  }
  return "unresolved";
}

void TieOverrides::set(const std::string& query_id, std::size_t rank, Verdict verdict) {
  if (verdict == Verdict::kUnresolved) {
    throw InvalidInput("a tie override must be relevant or irrelevant");
  }
  entries_[{query_id, rank}] = verdict;
}

std::optional<Verdict> TieOverrides::find(const std::string& query_id, std::size_t rank) const {
  auto it = entries_.find({query_id, rank});
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

int sum_scores(std::span<const Label> row) {
  if (row.empty()) throw InvalidInput("cannot score an empty judgment row");
  int s = 0;
  for (Label label : row) s += score_of(label);
  return s;
}

Verdict binary_verdict(int score_sum, std::optional<Verdict> tie_override) {
  if (score_sum > 0) return Verdict::kRelevant;
  if (score_sum < 0) return Verdict::kIrrelevant;
  return tie_override.value_or(Verdict::kUnresolved);
}

std::vector<ItemVerdict> item_verdicts(const JudgmentMatrix& matrix,
                                       const TieOverrides& overrides) {
  std::vector<ItemVerdict> out;
  out.reserve(matrix.item_count());
  for (std::size_t rank = 1; rank <= matrix.item_count(); ++rank) {
    const int s = sum_scores(matrix.row(rank));
    std::optional<Verdict> tie;
    if (s == 0) tie = overrides.find(matrix.query_id(), rank);
    out.push_back({rank, s, binary_verdict(s, tie)});
  }
  return out;
}

int gamma(std::span<const Label> row) {
  if (row.empty()) throw InvalidInput("cannot count distinct labels of an empty row");
  std::bitset<kLabelCount> seen;
  for (Label label : row) seen.set(static_cast<std::size_t>(label));
  return static_cast<int>(seen.count());
}

RjcdReport rjcd(const JudgmentMatrix& matrix) {
  RjcdReport report;
  report.query_id = matrix.query_id();
  report.gammas.reserve(matrix.item_count());
  for (const auto& row : matrix.rows()) {
    const int g = gamma(row);
    report.gammas.push_back(g);
    report.judgment_number += static_cast<std::size_t>(g);
    if (g == 1) ++report.agreement_number;
  }
  report.rho = static_cast<double>(report.agreement_number) /
               static_cast<double>(report.judgment_number);
  return report;
}

Qrels qrels_from_judgments(const JudgmentMatrix& matrix, const TieOverrides& overrides) {
  Qrels qrels;
  qrels.query_id = matrix.query_id();
  qrels.relevant.reserve(matrix.item_count());
  std::vector<UnresolvedTies::Item> unresolved;
  for (const auto& item : item_verdicts(matrix, overrides)) {
    if (item.verdict == Verdict::kUnresolved) {
      unresolved.push_back({matrix.query_id(), item.rank});
      continue;
    }
    const bool relevant = item.verdict == Verdict::kRelevant;
    qrels.relevant.push_back(relevant);
    if (relevant) ++qrels.total_relevant;
  }
  if (!unresolved.empty()) throw UnresolvedTies(std::move(unresolved));
  return qrels;
}

double fleiss_kappa(const JudgmentMatrix& matrix) {
  const std::size_t h = matrix.assessor_count();
  if (h < 2) throw InvalidInput("Fleiss' kappa needs at least two assessors");

  const double raters = static_cast<double>(h);
  const double items = static_cast<double>(matrix.item_count());
  std::array<double, kLabelCount> column_totals{};
  double observed_sum = 0.0;

  for (const auto& row : matrix.rows()) {
    std::array<double, kLabelCount> counts{};
    for (Label label : row) counts[static_cast<std::size_t>(label)] += 1.0;
    double agreeing_pairs = 0.0;
    for (std::size_t c = 0; c < kLabelCount; ++c) {
      agreeing_pairs += counts[c] * (counts[c] - 1.0);
      column_totals[c] += counts[c];
    }
    observed_sum += agreeing_pairs / (raters * (raters - 1.0));
  }

  const double observed = observed_sum / items;
  double expected = 0.0;
  for (double total : column_totals) {
    const double share = total / (items * raters);
    expected += share * share;
  }

  if (expected >= 1.0) {
    if (observed >= 1.0) return 1.0;
    throw NumericError("Fleiss' kappa undefined: chance agreement is 1");
  }
  return (observed - expected) / (1.0 - expected);
}

double jaccard_agreement(const JudgmentMatrix& matrix, std::size_t a, std::size_t b) {
  const std::size_t h = matrix.assessor_count();
  if (a >= h || b >= h) {
    throw InvalidInput("assessor index out of range (h = " + std::to_string(h) + ")");
  }
  if (a == b) throw InvalidInput("Jaccard agreement needs two different assessors");

  auto positive = [](Label label) { return label == Label::R || label == Label::P; };
  std::size_t both = 0;
  std::size_t either = 0;
  for (const auto& row : matrix.rows()) {
    const bool in_a = positive(row[a]);
    const bool in_b = positive(row[b]);
    if (in_a && in_b) ++both;
    if (in_a || in_b) ++either;
  }
  if (either == 0) return 1.0;
  return static_cast<double>(both) / static_cast<double>(either);
}

}  // namespace rjcd
