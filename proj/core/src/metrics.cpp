#include "rjcd/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "rjcd/error.hpp"

namespace rjcd {

double precision(const ContingencyTable& tbl) {
  if (tbl.tp + tbl.fp == 0) throw UndefinedMetric("precision undefined: tp + fp = 0");
  return static_cast<double>(tbl.tp) / static_cast<double>(tbl.tp + tbl.fp);
}

double recall(const ContingencyTable& tbl) {
  if (tbl.tp + tbl.fn == 0) throw UndefinedMetric("recall undefined: tp + fn = 0");
  return static_cast<double>(tbl.tp) / static_cast<double>(tbl.tp + tbl.fn);
}

double p_at_n(const std::vector<bool>& ranked, std::size_t n) {
  if (n == 0 || n > ranked.size()) {
    throw InvalidInput("P@" + std::to_string(n) + " needs 1 <= n <= " +
                       std::to_string(ranked.size()));
  }
  const auto hits = std::count(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(n), true);
  return static_cast<double>(hits) / static_cast<double>(n);
}

PrCurve pr_curve(const std::vector<bool>& ranked, std::size_t r_total, std::string query_id) {
  if (r_total == 0) throw InvalidInput("pr_curve needs at least one relevant item");
  const auto in_list = static_cast<std::size_t>(std::count(ranked.begin(), ranked.end(), true));
  if (in_list > r_total) {
    throw InvalidInput("ranked list holds " + std::to_string(in_list) +
                       " relevant items but r_total is " + std::to_string(r_total));
  }

  PrCurve curve;
  curve.query_id = std::move(query_id);
  curve.total_relevant = r_total;
  curve.points.reserve(in_list);
  std::size_t cum = 0;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    if (!ranked[i]) continue;
    ++cum;
    const std::size_t rank = i + 1;
    curve.points.push_back({rank, cum, static_cast<double>(cum) / static_cast<double>(r_total),
                            static_cast<double>(cum) / static_cast<double>(rank)});
  }
  return curve;
}

RecallLevelProfile interpolated_profile(const PrCurve& curve) {
  RecallLevelProfile profile;
  for (std::size_t k = 1; k <= kRecallLevels; ++k) {
    double best = 0.0;
    for (const auto& point : curve.points) {
      // recall >= k/10, compared without rounding
      if (point.cum_relevant * kRecallLevels >= k * curve.total_relevant) {
        best = std::max(best, point.precision);
      }
    }
    profile.precision[k - 1] = best;
  }
  return profile;
}

double mean_profile_precision(const RecallLevelProfile& profile) {
  return std::accumulate(profile.precision.begin(), profile.precision.end(), 0.0) /
         static_cast<double>(kRecallLevels);
}

double improvement(const RecallLevelProfile& baseline, const RecallLevelProfile& treated) {
  return mean_profile_precision(treated) - mean_profile_precision(baseline);
}

Moments moments(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidInput("paired series differ in length");
  if (x.empty()) throw InvalidInput("moments of an empty sample");
  const double n = static_cast<double>(x.size());
  Moments m;
  m.mean_x = std::accumulate(x.begin(), x.end(), 0.0) / n;
  m.mean_y = std::accumulate(y.begin(), y.end(), 0.0) / n;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - m.mean_x;
    const double dy = y[i] - m.mean_y;
    m.var_x += dx * dx;
    m.var_y += dy * dy;
    m.cov_xy += dx * dy;
  }
  m.var_x /= n;
  m.var_y /= n;
  m.cov_xy /= n;
  return m;
}

double student_t_two_tailed(double t, double df) {
  if (!(df > 0.0)) throw InvalidInput("Student-t needs positive degrees of freedom");
  if (std::isinf(t)) return 0.0;
  const boost::math::students_t dist(df);
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
}

CorrelationResult pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidInput("pearson: series differ in length");
  if (x.size() < 3) throw InvalidInput("pearson needs at least 3 pairs");
  const auto constant = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [&](double e) { return e == v.front(); });
  };
  const Moments m = moments(x, y);
  if (constant(x) || constant(y) || !(m.var_x > 0.0) || !(m.var_y > 0.0)) {
    throw NumericError("pearson: a series has zero variance");
  }

  CorrelationResult res;
  res.n = x.size();
  res.r = std::clamp(m.cov_xy / std::sqrt(m.var_x * m.var_y), -1.0, 1.0);
  const double df = static_cast<double>(res.n - 2);
  const double denom = 1.0 - res.r * res.r;
  if (denom <= 0.0) {
    res.t_stat = std::copysign(std::numeric_limits<double>::infinity(), res.r);
    res.p_value = 0.0;
  } else {
    res.t_stat = res.r * std::sqrt(df / denom);
    res.p_value = student_t_two_tailed(res.t_stat, df);
  }
  return res;
}

GateResult gate_queries(std::span<const RjcdReport> reports, double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw InvalidInput("RJCD threshold must lie in [0, 1]");
  }
  GateResult out;
  for (const auto& report : reports) {
    (report.rho < threshold ? out.excluded : out.kept).push_back(report);
  }
  return out;
}

double round_half_away(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(value * scale) / scale;
}

}  // namespace rjcd
