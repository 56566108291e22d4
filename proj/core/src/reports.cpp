#include "rjcd/reports.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>

#include "rjcd/csv.hpp"
#include "rjcd/error.hpp"

namespace rjcd {

QueryEvaluation evaluate_query(const JudgmentMatrix& matrix, const TieOverrides& overrides,
                               std::span<const std::size_t> reranked_order) {
  const Qrels qrels = qrels_from_judgments(matrix, overrides);
  const std::size_t n = qrels.relevant.size();

  std::vector<bool> reranked = qrels.relevant;
  if (!reranked_order.empty()) {
    if (reranked_order.size() != n) {
      throw InvalidInput("re-ranked order for query '" + matrix.query_id() + "' has " +
                         std::to_string(reranked_order.size()) + " items, expected " +
                         std::to_string(n));
    }
    std::vector<bool> seen(n + 1, false);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t original = reranked_order[i];
      if (original == 0 || original > n || seen[original]) {
        throw InvalidInput("re-ranked order for query '" + matrix.query_id() +
                           "' is not a permutation of 1.." + std::to_string(n));
      }
      seen[original] = true;
      reranked[i] = qrels.relevant[original - 1];
    }
  }

  QueryEvaluation ev;
  ev.query_id = matrix.query_id();
  ev.rjcd = rjcd(matrix);
  ev.total_relevant = qrels.total_relevant;
  ev.baseline_curve.query_id = ev.query_id;
  ev.reranked_curve.query_id = ev.query_id;
  if (qrels.total_relevant > 0) {
    ev.baseline_curve = pr_curve(qrels.relevant, qrels.total_relevant, ev.query_id);
    ev.reranked_curve = pr_curve(reranked, qrels.total_relevant, ev.query_id);
    ev.baseline_profile = interpolated_profile(ev.baseline_curve);
    ev.reranked_profile = interpolated_profile(ev.reranked_curve);
  }
  ev.p_at_depth = std::min<std::size_t>(10, n);
  ev.baseline_p_at = p_at_n(qrels.relevant, ev.p_at_depth);
  ev.reranked_p_at = p_at_n(reranked, ev.p_at_depth);
  ev.mean_baseline = mean_profile_precision(ev.baseline_profile);
  ev.mean_reranked = mean_profile_precision(ev.reranked_profile);
  ev.improvement = improvement(ev.baseline_profile, ev.reranked_profile);
  return ev;
}

RecallLevelProfile average_profiles(std::span<const RecallLevelProfile> profiles) {
  RecallLevelProfile avg;
  if (profiles.empty()) return avg;
  for (const auto& p : profiles) {
    for (std::size_t k = 0; k < kRecallLevels; ++k) avg.precision[k] += p.precision[k];
  }
  for (double& v : avg.precision) v /= static_cast<double>(profiles.size());
  return avg;
}

std::string format_fixed4(double value) {
  double rounded = round_half_away(value, 4);
  if (rounded == 0.0) rounded = 0.0;  // drops the sign of -0.0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", rounded);
  return buf;
}

std::string sanitize_file_stem(const std::string& query_id) {
  std::string out;
  out.reserve(query_id.size());
  for (unsigned char c : query_id) {
    const bool keep = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
                      (c >= 'A' && c <= 'Z') || c == '_' || c == '-';
    out.push_back(keep ? static_cast<char>(c) : '_');
  }
  return out.empty() ? std::string("_") : out;
}

namespace {

std::string format_general(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

template <std::size_t N>
void row(std::ostream& out, const std::array<std::string, N>& fields) {
  write_csv_row(out, std::span<const std::string>(fields));
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

constexpr double kWidth = 640.0;
constexpr double kHeight = 400.0;
constexpr double kLeft = 60.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

void svg_open(std::ostream& out, std::string_view title) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"14\">"
      << xml_escape(title) << "</text>\n";
}

}  // namespace

void write_rjcd_csv(std::ostream& out, std::span<const RjcdReport> reports) {
  out << "query_id,rho,AN,JN\n";
  for (const auto& r : reports) {
    row<4>(out, {r.query_id, format_fixed4(r.rho), std::to_string(r.agreement_number),
                 std::to_string(r.judgment_number)});
  }
}

void write_summary_csv(std::ostream& out, std::span<const QueryEvaluation> evaluations) {
  out << "query_id,rho,AN,JN,mean_precision_baseline,mean_precision_reranked,improvement\n";
  for (const auto& ev : evaluations) {
    row<7>(out, {ev.query_id, format_fixed4(ev.rjcd.rho), std::to_string(ev.rjcd.agreement_number),
                 std::to_string(ev.rjcd.judgment_number), format_fixed4(ev.mean_baseline),
                 format_fixed4(ev.mean_reranked), format_fixed4(ev.improvement)});
  }
}

void write_pr_curve_csv(std::ostream& out, const PrCurve& curve) {
  out << "rank,recall,precision\n";
  for (const auto& p : curve.points) {
    row<3>(out, {std::to_string(p.rank), format_fixed4(p.recall), format_fixed4(p.precision)});
  }
}

void write_profile_csv(std::ostream& out, const RecallLevelProfile& profile) {
  out << "level,precision\n";
  for (std::size_t k = 0; k < kRecallLevels; ++k) {
    row<2>(out, {format_fixed4(RecallLevelProfile::level(k)), format_fixed4(profile.precision[k])});
  }
}

void write_gate_csv(std::ostream& out, const GateResult& gate) {
  out << "query_id,rho,decision\n";
  for (const auto& r : gate.kept) row<3>(out, {r.query_id, format_fixed4(r.rho), "kept"});
  for (const auto& r : gate.excluded) row<3>(out, {r.query_id, format_fixed4(r.rho), "excluded"});
}

void write_correlation_csv(std::ostream& out, const CorrelationResult& result) {
  out << "n,r,t_stat,p_value\n";
  row<4>(out, {std::to_string(result.n), format_fixed4(result.r), format_fixed4(result.t_stat),
               format_general(result.p_value)});
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
  out << "p_unanimous,seed,rho,AN,JN\n";
  for (const auto& r : rows) {
    row<5>(out, {format_fixed4(r.p_unanimous), std::to_string(r.seed), format_fixed4(r.rho),
                 std::to_string(r.agreement_number), std::to_string(r.judgment_number)});
  }
}

void write_pr_svg(std::ostream& out, std::span<const QueryEvaluation> evaluations) {
  std::vector<RecallLevelProfile> base;
  std::vector<RecallLevelProfile> treated;
  for (const auto& ev : evaluations) {
    base.push_back(ev.baseline_profile);
    treated.push_back(ev.reranked_profile);
  }
  const RecallLevelProfile avg_base = average_profiles(base);
  const RecallLevelProfile avg_treated = average_profiles(treated);

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto x_of = [&](std::size_t k) {
    return kLeft + plot_w * static_cast<double>(k) / static_cast<double>(kRecallLevels - 1);
  };
  auto y_of = [&](double precision) { return kTop + plot_h * (1.0 - precision); };

  svg_open(out, "Precision at recall levels, averaged over " +
                    std::to_string(evaluations.size()) + " queries");
  out << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << kLeft + plot_w
      << "\" y2=\"" << kTop + plot_h << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
      << kTop + plot_h << "\" stroke=\"black\"/>\n";
  for (std::size_t k = 0; k < kRecallLevels; ++k) {
    out << "<text x=\"" << x_of(k) << "\" y=\"" << kTop + plot_h + 16
        << "\" text-anchor=\"middle\">" << (k + 1) * 10 << "%</text>\n";
  }
  for (int tick = 0; tick <= 10; tick += 2) {
    const double p = tick / 10.0;
    out << "<text x=\"" << kLeft - 6 << "\" y=\"" << y_of(p) + 4 << "\" text-anchor=\"end\">"
        << format_fixed4(p).substr(0, 3) << "</text>\n";
  }
  out << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 18
      << "\" text-anchor=\"middle\">recall</text>\n";

  auto polyline = [&](const RecallLevelProfile& profile, const char* colour, const char* name,
                      double legend_y) {
    out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\" points=\"";
    for (std::size_t k = 0; k < kRecallLevels; ++k) {
      out << (k ? " " : "") << x_of(k) << ',' << y_of(profile.precision[k]);
    }
    out << "\"/>\n";
    out << "<text x=\"" << kLeft + plot_w - 4 << "\" y=\"" << legend_y << "\" text-anchor=\"end\" fill=\""
        << colour << "\">" << name << "</text>\n";
  };
  polyline(avg_base, "#1f77b4", "baseline", kTop + 12);
  polyline(avg_treated, "#d62728", "re-ranked", kTop + 26);
  out << "</g>\n</svg>\n";
}

void write_improvement_svg(std::ostream& out, std::span<const QueryEvaluation> evaluations) {
  std::vector<const QueryEvaluation*> sorted;
  for (const auto& ev : evaluations) sorted.push_back(&ev);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto* a, const auto* b) { return a->rjcd.rho > b->rjcd.rho; });

  double span = 0.05;
  for (const auto* ev : sorted) span = std::max(span, std::fabs(ev->improvement));
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const double zero_y = kTop + plot_h / 2;
  const double slot = sorted.empty() ? plot_w : plot_w / static_cast<double>(sorted.size());

  svg_open(out, "Precision improvement by query, sorted by RJCD");
  out << "<g font-family=\"sans-serif\" font-size=\"10\">\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << zero_y << "\" x2=\"" << kLeft + plot_w
      << "\" y2=\"" << zero_y << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << kLeft - 6 << "\" y=\"" << kTop + 4 << "\" text-anchor=\"end\">+"
      << format_fixed4(span) << "</text>\n";
  out << "<text x=\"" << kLeft - 6 << "\" y=\"" << kTop + plot_h + 4 << "\" text-anchor=\"end\">-"
      << format_fixed4(span) << "</text>\n";
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const auto& ev = *sorted[i];
    const double height = plot_h / 2 * std::fabs(ev.improvement) / span;
    const double x = kLeft + slot * static_cast<double>(i) + slot * 0.15;
    const double y = ev.improvement >= 0 ? zero_y - height : zero_y;
    out << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << slot * 0.7 << "\" height=\""
        << height << "\" fill=\"" << (ev.improvement >= 0 ? "#2ca02c" : "#d62728") << "\">"
        << "<title>" << xml_escape(ev.query_id) << ": rho " << format_fixed4(ev.rjcd.rho)
        << ", improvement " << format_fixed4(ev.improvement) << "</title></rect>\n";
    // RJCD on the same vertical scale as the positive half.
    const double rho_y = zero_y - plot_h / 2 * std::min(ev.rjcd.rho, 1.0);
    out << "<circle cx=\"" << x + slot * 0.35 << "\" cy=\"" << rho_y
        << "\" r=\"3\" fill=\"#1f77b4\"/>\n";
    out << "<text transform=\"translate(" << x + slot * 0.35 << ',' << kTop + plot_h + 8
        << ") rotate(60)\">" << xml_escape(ev.query_id) << "</text>\n";
  }
  out << "</g>\n</svg>\n";
}

std::vector<std::filesystem::path> write_reports(const ReportSet& results,
                                                 const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir)) {
    throw IoError("cannot create output directory '" + out_dir.string() + "'");
  }

  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::string& name, auto&& writer) {
    const auto path = out_dir / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    writer(out);
    out.flush();
    if (!out) throw IoError("write to '" + path.string() + "' failed");
    written.push_back(path);
  };

  emit("rjcd.csv", [&](std::ostream& o) { write_rjcd_csv(o, results.rjcd); });
  emit("summary.csv", [&](std::ostream& o) { write_summary_csv(o, results.evaluations); });
  emit("precision_at_10.csv", [&](std::ostream& o) {
    o << "query_id,depth,baseline,reranked\n";
    for (const auto& ev : results.evaluations) {
      row<4>(o, {ev.query_id, std::to_string(ev.p_at_depth), format_fixed4(ev.baseline_p_at),
                 format_fixed4(ev.reranked_p_at)});
    }
  });

  std::set<std::string> stems;
  for (const auto& ev : results.evaluations) {
    std::string stem = sanitize_file_stem(ev.query_id);
    for (int suffix = 2; !stems.insert(stem).second; ++suffix) {
      stem = sanitize_file_stem(ev.query_id) + "-" + std::to_string(suffix);
    }
    emit("pr_" + stem + "_baseline.csv",
         [&](std::ostream& o) { write_pr_curve_csv(o, ev.baseline_curve); });
    emit("pr_" + stem + "_reranked.csv",
         [&](std::ostream& o) { write_pr_curve_csv(o, ev.reranked_curve); });
    emit("profile_" + stem + "_baseline.csv",
         [&](std::ostream& o) { write_profile_csv(o, ev.baseline_profile); });
    emit("profile_" + stem + "_reranked.csv",
         [&](std::ostream& o) { write_profile_csv(o, ev.reranked_profile); });
  }

  emit("pr_curves.svg", [&](std::ostream& o) { write_pr_svg(o, results.evaluations); });
  emit("improvement_vs_rjcd.svg",
       [&](std::ostream& o) { write_improvement_svg(o, results.evaluations); });

  if (results.gate) emit("gate.csv", [&](std::ostream& o) { write_gate_csv(o, *results.gate); });
  if (results.correlation) {
    emit("correlation.csv", [&](std::ostream& o) { write_correlation_csv(o, *results.correlation); });
  }
  if (!results.sweep.empty()) {
    emit("sweep.csv", [&](std::ostream& o) { write_sweep_csv(o, results.sweep); });
  }
  return written;
}

}  // namespace rjcd
