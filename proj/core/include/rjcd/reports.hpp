#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rjcd/judgment.hpp"
#include "rjcd/metrics.hpp"
#include "rjcd/panel_sim.hpp"

namespace rjcd {

struct QueryEvaluation {
  std::string query_id;
  RjcdReport rjcd;
  std::size_t total_relevant = 0;
  PrCurve baseline_curve;
  PrCurve reranked_curve;
  RecallLevelProfile baseline_profile;
  RecallLevelProfile reranked_profile;
  std::size_t p_at_depth = 0;  // min(10, N)
  double baseline_p_at = 0.0;
  double reranked_p_at = 0.0;
  double mean_baseline = 0.0;
  double mean_reranked = 0.0;
  double improvement = 0.0;
};

// Evaluates the original order against `reranked_order` (original ranks in
// new order; empty means "same as baseline"). A query with no relevant item
// gets empty curves and all-zero profiles. Throws UnresolvedTies and
// InvalidInput (order is not a permutation of 1..N).
QueryEvaluation evaluate_query(const JudgmentMatrix& matrix, const TieOverrides& overrides,
                               std::span<const std::size_t> reranked_order = {});

// Level-wise mean of several profiles (all zeros for an empty span).
RecallLevelProfile average_profiles(std::span<const RecallLevelProfile> profiles);

// Fixed 4-decimal text, rounded half away from zero, never "-0.0000".
std::string format_fixed4(double value);

// File-name-safe form of a query id: [A-Za-z0-9_-] kept, everything else '_'.
std::string sanitize_file_stem(const std::string& query_id);

struct ReportSet {
  std::vector<RjcdReport> rjcd;
  std::vector<QueryEvaluation> evaluations;
  std::optional<GateResult> gate;
  std::optional<CorrelationResult> correlation;
  std::vector<SweepRow> sweep;
};

void write_rjcd_csv(std::ostream& out, std::span<const RjcdReport> reports);
void write_summary_csv(std::ostream& out, std::span<const QueryEvaluation> evaluations);
void write_pr_curve_csv(std::ostream& out, const PrCurve& curve);
void write_profile_csv(std::ostream& out, const RecallLevelProfile& profile);
void write_gate_csv(std::ostream& out, const GateResult& gate);
void write_correlation_csv(std::ostream& out, const CorrelationResult& result);
void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);

// Averaged baseline vs re-ranked precision at the ten recall levels.
void write_pr_svg(std::ostream& out, std::span<const QueryEvaluation> evaluations);
// Improvement per query as bars, queries sorted by decreasing RJCD.
void write_improvement_svg(std::ostream& out, std::span<const QueryEvaluation> evaluations);

// Writes into out_dir (created if needed):
//   rjcd.csv, summary.csv, precision_at_10.csv, pr_curves.svg,
//   improvement_vs_rjcd.svg, and per evaluated query
//   pr_<id>_{baseline,reranked}.csv and profile_<id>_{baseline,reranked}.csv;
//   plus gate.csv / correlation.csv / sweep.csv when those parts are present.
// Returns the paths written, in write order. Throws IoError.
std::vector<std::filesystem::path> write_reports(const ReportSet& results,
                                                 const std::filesystem::path& out_dir);

}  // namespace rjcd
