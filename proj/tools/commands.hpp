#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace rjcd::cli {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kValidation = 2,
  kUnresolvedTies = 3,
  kNumeric = 4,
  kOutputIo = 5,
};

struct RunConfig {
  std::filesystem::path judgments;
  std::filesystem::path snippets;
  std::filesystem::path queries;
  std::filesystem::path overrides;
  std::filesystem::path profiles;
  std::filesystem::path corpus;
  std::filesystem::path stopwords;
  std::filesystem::path rerank_run;  // reranked.csv used as the treated ordering
  std::filesystem::path pairs;       // rho,improvement table for `correlate`
  std::string columns;               // canonical=actual,... header renames

  double threshold = 0.05;
  std::size_t k = 5;
  double tau = 2.0;
  std::filesystem::path out = "rjcd_out";
  std::uint64_t seed = 0;

  // simulate
  std::size_t assessors = 5;
  std::size_t items = 50;
  std::vector<double> p_unanimous{0.0, 0.25, 0.5, 0.75, 1.0};
  std::size_t seeds = 1;
  bool write_judgments = false;

  // Throws InvalidInput unless threshold is in [0, 1] and k >= 1.
  void validate() const;
};

// Each command reports progress on `out`, problems on `err`, and returns an
// ExitCode.
int cmd_rjcd(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_eval(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_gate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_correlate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_rerank(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_report(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// Parses argv (subcommand + flags, optional --config file) and dispatches.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rjcd::cli
