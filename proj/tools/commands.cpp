#include "commands.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>

#include "rjcd/csv.hpp"
#include "rjcd/data_io.hpp"
#include "rjcd/error.hpp"
#include "rjcd/judgment.hpp"
#include "rjcd/metrics.hpp"
#include "rjcd/panel_sim.hpp"
#include "rjcd/reports.hpp"
#include "rjcd/reranker.hpp"

namespace rjcd::cli {

void RunConfig::validate() const {
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw InvalidInput("--threshold must be in [0, 1]");
  if (k < 1) throw InvalidInput("--k must be at least 1");
}

namespace {

// Maps the library's exception types onto exit codes.
int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const UnresolvedTies& e) {
    err << "error: " << e.what() << "\n";
    for (const auto& item : e.items()) {
      err << "  unresolved: query '" << item.query_id << "' rank " << item.rank << "\n";
    }
    return kUnresolvedTies;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const NumericError& e) {
    err << "error: " << e.what() << "\n";
    return kNumeric;
  } catch (const UndefinedMetric& e) {
    err << "error: " << e.what() << "\n";
    return kNumeric;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kOutputIo;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}

void require_path(const std::filesystem::path& p, const char* flag) {
  if (p.empty()) throw InvalidInput(std::string(flag) + " is required");
}

ColumnMap column_map(const RunConfig& cfg) {
  return cfg.columns.empty() ? ColumnMap{} : parse_column_map(cfg.columns);
}

std::vector<JudgmentMatrix> load_required_judgments(const RunConfig& cfg) {
  require_path(cfg.judgments, "--judgments");
  auto matrices = load_judgments(cfg.judgments, column_map(cfg));
  if (matrices.empty()) {
    throw ParseError(ParseErrorKind::kMalformedRecord, cfg.judgments.string(), 0,
                     "file holds no judgments");
  }
  return matrices;
}

std::vector<RjcdReport> rjcd_reports(std::span<const JudgmentMatrix> matrices) {
  std::vector<RjcdReport> reports;
  reports.reserve(matrices.size());
  for (const auto& m : matrices) reports.push_back(rjcd(m));
  return reports;
}

void write_single(const std::filesystem::path& dir, const std::string& name,
                  const std::function<void(std::ostream&)>& writer) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const auto path = dir / name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  writer(out);
  out.flush();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

Dataset load_dataset(const RunConfig& cfg) {
  Dataset ds;
  const ColumnMap columns = column_map(cfg);
  ds.judgments = load_required_judgments(cfg);
  if (!cfg.snippets.empty()) ds.snippets = load_snippets(cfg.snippets, columns);
  if (!cfg.queries.empty()) ds.queries = load_queries(cfg.queries, columns);
  if (!cfg.overrides.empty()) ds.overrides = load_overrides(cfg.overrides, columns);
  check_dataset(ds);
  return ds;
}

// Runs the classification/re-ranking pipeline; returns original ranks in new
// order per query.
std::map<std::string, std::vector<std::size_t>> run_reranker(const RunConfig& cfg,
                                                             std::span<const SnippetList> lists,
                                                             std::ostream* csv) {
  require_path(cfg.corpus, "--corpus");
  require_path(cfg.profiles, "--profiles");
  const auto corpus = load_corpus(cfg.corpus);
  const auto profiles = load_profiles(cfg.profiles, column_map(cfg));
  const Tokenizer tokenizer =
      cfg.stopwords.empty() ? Tokenizer{} : Tokenizer{load_stopwords(cfg.stopwords.string())};
  const NbModel model = train_nb(corpus, tokenizer);

  std::map<std::string, std::vector<std::size_t>> orders;
  if (csv) write_rerank_header(*csv);
  for (const auto& list : lists) {
    auto it = profiles.find(list.query_id);
    if (it == profiles.end()) {
      throw InvalidInput("no preference profile for query '" + list.query_id + "'");
    }
    const auto items = rerank_query(list.snippets, model, it->second, {cfg.k, cfg.tau});
    if (csv) write_rerank_rows(*csv, list.query_id, items);
    auto& order = orders[list.query_id];
    for (const auto& item : items) order.push_back(item.original_rank);
  }
  return orders;
}

// Evaluates every judged query; ties from all queries are reported together.
std::vector<QueryEvaluation> evaluate_all(
    const Dataset& ds, const std::map<std::string, std::vector<std::size_t>>& orders,
    bool orders_required) {
  std::vector<QueryEvaluation> evaluations;
  std::vector<UnresolvedTies::Item> unresolved;
  for (const auto& m : ds.judgments) {
    std::span<const std::size_t> order;
    if (auto it = orders.find(m.query_id()); it != orders.end()) {
      // A run may cover more snippets than were judged; keep judged ranks only.
      std::vector<std::size_t> judged;
      for (std::size_t r : it->second) {
        if (r <= m.item_count()) judged.push_back(r);
      }
      try {
        evaluations.push_back(evaluate_query(m, ds.overrides, judged));
      } catch (const UnresolvedTies& e) {
        unresolved.insert(unresolved.end(), e.items().begin(), e.items().end());
      }
      continue;
    }
    if (orders_required) {
      throw InvalidInput("re-ranked run has no ordering for query '" + m.query_id() + "'");
    }
    try {
      evaluations.push_back(evaluate_query(m, ds.overrides, order));
    } catch (const UnresolvedTies& e) {
      unresolved.insert(unresolved.end(), e.items().begin(), e.items().end());
    }
  }
  if (!unresolved.empty()) throw UnresolvedTies(std::move(unresolved));
  return evaluations;
}

std::optional<CorrelationResult> correlate_evaluations(std::span<const QueryEvaluation> evs,
                                                       std::ostream& out) {
  std::vector<double> rho;
  std::vector<double> gain;
  for (const auto& ev : evs) {
    rho.push_back(ev.rjcd.rho);
    gain.push_back(ev.improvement);
  }
  try {
    return pearson(rho, gain);
  } catch (const std::exception& e) {
    out << "correlation skipped: " << e.what() << "\n";
    return std::nullopt;
  }
}

void print_correlation(std::ostream& out, const CorrelationResult& c) {
  out << "pearson r = " << format_fixed4(c.r) << ", n = " << c.n << ", t = " << format_fixed4(c.t_stat)
      << ", p = " << c.p_value << "\n";
}

}  // namespace

int cmd_rjcd(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    cfg.validate();
    const auto reports = rjcd_reports(load_required_judgments(cfg));
    write_single(cfg.out, "rjcd.csv", [&](std::ostream& o) { write_rjcd_csv(o, reports); });
    for (const auto& r : reports) {
      out << r.query_id << ": rho = " << format_fixed4(r.rho) << " (AN = " << r.agreement_number
          << ", JN = " << r.judgment_number << ")\n";
    }
    return kOk;
  });
}

int cmd_eval(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    cfg.validate();
    const Dataset ds = load_dataset(cfg);
    std::map<std::string, std::vector<std::size_t>> orders;
    if (!cfg.rerank_run.empty()) orders = load_rerank_run(cfg.rerank_run, column_map(cfg));

    ReportSet results;
    results.evaluations = evaluate_all(ds, orders, !cfg.rerank_run.empty());
    for (const auto& ev : results.evaluations) results.rjcd.push_back(ev.rjcd);
    const auto files = write_reports(results, cfg.out);
    for (const auto& ev : results.evaluations) {
      out << ev.query_id << ": P@" << ev.p_at_depth << " " << format_fixed4(ev.baseline_p_at)
          << " -> " << format_fixed4(ev.reranked_p_at) << ", mean precision "
          << format_fixed4(ev.mean_baseline) << " -> " << format_fixed4(ev.mean_reranked)
          << " (improvement " << format_fixed4(ev.improvement) << ")\n";
    }
    out << "wrote " << files.size() << " files to " << cfg.out.string() << "\n";
    return kOk;
  });
}

int cmd_gate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    cfg.validate();
    const auto reports = rjcd_reports(load_required_judgments(cfg));
    const GateResult gate = gate_queries(reports, cfg.threshold);
    write_single(cfg.out, "gate.csv", [&](std::ostream& o) { write_gate_csv(o, gate); });
    for (const auto& r : gate.kept) out << "kept     " << r.query_id << " (rho " << format_fixed4(r.rho) << ")\n";
    for (const auto& r : gate.excluded) {
      out << "excluded " << r.query_id << " (rho " << format_fixed4(r.rho) << " < "
          << cfg.threshold << ")\n";
    }
    return kOk;
  });
}

int cmd_correlate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    cfg.validate();
    require_path(cfg.pairs, "--pairs");
    std::ifstream in(cfg.pairs, std::ios::binary);
    if (!in) throw ParseError(ParseErrorKind::kIo, cfg.pairs.string(), 0, "cannot open file");
    const std::string source = cfg.pairs.string();
    auto records = read_csv(in, source);
    if (records.empty()) throw ParseError(ParseErrorKind::kHeader, source, 1, "file has no header");
    static constexpr std::array<std::string_view, 2> required{"rho", "improvement"};
    const HeaderIndex header(records.front(), source, required, column_map(cfg));

    std::vector<double> rho;
    std::vector<double> gain;
    for (std::size_t i = 1; i < records.size(); ++i) {
      const auto& rec = records[i];
      header.check_width(rec);
      for (auto [name, dest] : {std::pair{"rho", &rho}, std::pair{"improvement", &gain}}) {
        const std::string& field = rec.fields[header[name]];
        char* end = nullptr;
        const double v = std::strtod(field.c_str(), &end);
        if (field.empty() || end != field.c_str() + field.size()) {
          throw ParseError(ParseErrorKind::kBadField, source, rec.line,
                           std::string(name) + " '" + field + "' is not a number");
        }
        dest->push_back(v);
      }
    }
    const CorrelationResult c = pearson(rho, gain);
    write_single(cfg.out, "correlation.csv", [&](std::ostream& o) { write_correlation_csv(o, c); });
    print_correlation(out, c);
    return kOk;
  });
}

int cmd_rerank(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    cfg.validate();
    require_path(cfg.snippets, "--snippets");
    const auto lists = load_snippets(cfg.snippets, column_map(cfg));
    std::map<std::string, std::vector<std::size_t>> orders;
    write_single(cfg.out, "reranked.csv",
                 [&](std::ostream& o) { orders = run_reranker(cfg, lists, &o); });
    out << "re-ranked " << orders.size() << " queries into "
        << (cfg.out / "reranked.csv").string() << "\n";
    return kOk;
  });
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    cfg.validate();
    if (cfg.seeds == 0) throw InvalidInput("--seeds must be at least 1");
    std::vector<PanelConfig> configs;
    for (double p : cfg.p_unanimous) {
      for (std::size_t s = 0; s < cfg.seeds; ++s) {
        PanelConfig pc;
        pc.assessors = cfg.assessors;
        pc.items = cfg.items;
        pc.p_unanimous = p;
        pc.seed = cfg.seed + s;
        pc.validate();
        configs.push_back(pc);
      }
    }
    const auto rows = sweep(configs);
    write_single(cfg.out, "sweep.csv", [&](std::ostream& o) { write_sweep_csv(o, rows); });
    if (cfg.write_judgments) {
      std::vector<JudgmentMatrix> matrices;
      for (const auto& pc : configs) {
        matrices.push_back(simulate_panel(
            pc, "sim_p" + format_fixed4(pc.p_unanimous) + "_s" + std::to_string(pc.seed)));
      }
      write_single(cfg.out, "judgments.csv",
                   [&](std::ostream& o) { write_judgments(o, matrices); });
    }
    for (const auto& r : rows) {
      out << "p_unanimous " << format_fixed4(r.p_unanimous) << " seed " << r.seed << ": rho "
          << format_fixed4(r.rho) << "\n";
    }
    return kOk;
  });
}

int cmd_report(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    cfg.validate();
    const Dataset ds = load_dataset(cfg);

    std::map<std::string, std::vector<std::size_t>> orders;
    bool have_run = false;
    if (!cfg.corpus.empty() || !cfg.profiles.empty()) {
      require_path(cfg.snippets, "--snippets");
      write_single(cfg.out, "reranked.csv",
                   [&](std::ostream& o) { orders = run_reranker(cfg, ds.snippets, &o); });
      have_run = true;
    } else if (!cfg.rerank_run.empty()) {
      orders = load_rerank_run(cfg.rerank_run, column_map(cfg));
      have_run = true;
    }

    ReportSet results;
    results.evaluations = evaluate_all(ds, orders, have_run);
    for (const auto& ev : results.evaluations) results.rjcd.push_back(ev.rjcd);
    results.gate = gate_queries(results.rjcd, cfg.threshold);
    results.correlation = correlate_evaluations(results.evaluations, out);
    const auto files = write_reports(results, cfg.out);

    out << results.evaluations.size() << " queries, " << results.gate->excluded.size()
        << " below the RJCD threshold " << cfg.threshold << "\n";
    if (results.correlation) print_correlation(out, *results.correlation);
    out << "wrote " << files.size() << " files to " << cfg.out.string() << "\n";
    return kOk;
  });
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Assessor convergence (RJCD), retrieval evaluation and snippet re-ranking"};
  app.set_config("--config", "", "TOML/INI file with option defaults; flags override it");
  app.require_subcommand(1);

  RunConfig cfg;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--judgments", cfg.judgments, "judgments.csv (query_id,rank,assessor_id,label)");
    sub->add_option("--snippets", cfg.snippets, "snippets.csv (query_id,rank,title,snippet,url)");
    sub->add_option("--queries", cfg.queries, "queries.csv (query,info_need,category)");
    sub->add_option("--overrides", cfg.overrides, "overrides.csv (query_id,rank,verdict)");
    sub->add_option("--profiles", cfg.profiles, "profiles.csv (query_id,topic1,topic2)");
    sub->add_option("--corpus", cfg.corpus, "training corpus, topic<TAB>text per line");
    sub->add_option("--stopwords", cfg.stopwords, "stopword file replacing the built-in list");
    sub->add_option("--rerank-run", cfg.rerank_run, "reranked.csv giving the treated ordering");
    sub->add_option("--pairs", cfg.pairs, "CSV with rho and improvement columns");
    sub->add_option("--columns", cfg.columns, "header renames, canonical=actual,...");
    sub->add_option("--threshold", cfg.threshold, "RJCD gating threshold")->capture_default_str();
    sub->add_option("--k", cfg.k, "neighbours for KNN label smoothing")->capture_default_str();
    sub->add_option("--tau", cfg.tau, "NB margin (nats) needed to overrule KNN")->capture_default_str();
    sub->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
    sub->add_option("--out", cfg.out, "output directory")->capture_default_str();
  };

  struct Sub {
    const char* name;
    const char* help;
    int (*fn)(const RunConfig&, std::ostream&, std::ostream&);
  };
  const std::array<Sub, 7> subs{{
      {"rjcd", "compute AN, JN and rho per query", cmd_rjcd},
      {"eval", "qrels, PR curves, recall-level profiles and P@10", cmd_eval},
      {"gate", "split queries by the RJCD threshold", cmd_gate},
      {"correlate", "Pearson r, t and p between rho and improvement", cmd_correlate},
      {"rerank", "classify snippets and re-rank by preference profile", cmd_rerank},
      {"simulate", "synthetic panels swept over p_unanimous", cmd_simulate},
      {"report", "full pipeline: rjcd, rerank/eval, gate, correlate, charts", cmd_report},
  }};
  std::vector<CLI::App*> apps;
  for (const auto& s : subs) {
    auto* sub = app.add_subcommand(s.name, s.help);
    add_common(sub);
    apps.push_back(sub);
  }
  CLI::App* simulate = apps[5];
  simulate->add_option("--assessors", cfg.assessors, "assessors per panel")->capture_default_str();
  simulate->add_option("--items", cfg.items, "items per panel")->capture_default_str();
  simulate->add_option("--p-unanimous", cfg.p_unanimous, "comma-separated unanimity probabilities")
      ->delimiter(',')
      ->capture_default_str();
  simulate->add_option("--seeds", cfg.seeds, "seeds per probability (seed, seed+1, ...)")
      ->capture_default_str();
  simulate->add_flag("--write-judgments", cfg.write_judgments, "also write judgments.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidation;
  }

  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (apps[i]->parsed()) return subs[i].fn(cfg, out, err);
  }
  return kValidation;
}

}  // namespace rjcd::cli
