#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rjcd/judgment.hpp"

namespace rjcd {

struct ContingencyTable {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;
};

// tp / (tp + fp); throws UndefinedMetric when nothing was retrieved.
double precision(const ContingencyTable& tbl);
// tp / (tp + fn); throws UndefinedMetric when nothing is relevant.
double recall(const ContingencyTable& tbl);

// Fraction of relevant items among the first n. Throws InvalidInput unless
// 1 <= n <= ranked.size().
double p_at_n(const std::vector<bool>& ranked, std::size_t n);

struct PrPoint {
  std::size_t rank = 0;  // 1-based position in the ranked list
  std::size_t cum_relevant = 0;
  double recall = 0.0;
  double precision = 0.0;
};

// Cumulative precision/recall, sampled at each relevant rank only.
struct PrCurve {
  std::string query_id;
  std::size_t total_relevant = 0;
  std::vector<PrPoint> points;
};

// Throws InvalidInput if r_total is 0 or smaller than the number of relevant
// items in the list.
PrCurve pr_curve(const std::vector<bool>& ranked, std::size_t r_total, std::string query_id = {});

inline constexpr std::size_t kRecallLevels = 10;

// Interpolated precision at recall 10%, 20%, ..., 100%.
struct RecallLevelProfile {
  std::array<double, kRecallLevels> precision{};

  static constexpr double level(std::size_t index) noexcept {
    return static_cast<double>(index + 1) / static_cast<double>(kRecallLevels);
  }
  friend bool operator==(const RecallLevelProfile&, const RecallLevelProfile&) = default;
};

// Level L takes the maximum precision over all points with recall >= L, or 0
// when no point reaches L. Recall is compared exactly in integer arithmetic.
RecallLevelProfile interpolated_profile(const PrCurve& curve);

double mean_profile_precision(const RecallLevelProfile& profile);

// mean(treated) - mean(baseline); negative when the treatment hurts.
double improvement(const RecallLevelProfile& baseline, const RecallLevelProfile& treated);

// Population moments of a paired sample.
struct Moments {
  double mean_x = 0.0;
  double mean_y = 0.0;
  double var_x = 0.0;
  double var_y = 0.0;
  double cov_xy = 0.0;
};

Moments moments(std::span<const double> x, std::span<const double> y);

struct CorrelationResult {
  double r = 0.0;
  std::size_t n = 0;
  double t_stat = 0.0;
  double p_value = 1.0;  // two-tailed, Student-t with n - 2 df
};

// Pearson r with a t-test against r = 0. Throws InvalidInput for mismatched
// lengths or n < 3 and NumericError when either series is constant.
CorrelationResult pearson(std::span<const double> x, std::span<const double> y);

// Two-tailed P(|T| >= |t|) for Student-t with df degrees of freedom.
double student_t_two_tailed(double t, double df);

inline constexpr double kDefaultRjcdThreshold = 0.05;

struct GateResult {
  std::vector<RjcdReport> kept;
  std::vector<RjcdReport> excluded;
};

// Excludes queries whose rho is strictly below threshold. Order within each
// partition follows the input.
GateResult gate_queries(std::span<const RjcdReport> reports,
                        double threshold = kDefaultRjcdThreshold);

// Rounds half away from zero to the given number of decimals.
double round_half_away(double value, int decimals);

}  // namespace rjcd
