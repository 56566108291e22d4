#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "oracles.hpp"
#include "rjcd/reports.hpp"

namespace rjcd::cli {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::string fixture(const char* name) { return testing::data_path(name).string(); }

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("rjcd_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "rjcd");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    out_.str("");
    err_.str("");
    return run(static_cast<int>(argv.size()), argv.data(), out_, err_);
  }

  fs::path write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p, std::ios::binary) << text;
    return p;
  }

  std::string out_dir() const { return (dir_ / "out").string(); }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

TEST_F(Cli, RjcdOnFixture) {
  ASSERT_EQ(invoke({"rjcd", "--judgments", fixture("resume_judgments.csv"), "--out", out_dir()}), kOk)
      << err_.str();
  EXPECT_EQ(slurp(dir_ / "out" / "rjcd.csv"), "query_id,rho,AN,JN\nresume,0.0069,1,145\n");
  EXPECT_NE(out_.str().find("rho = 0.0069"), std::string::npos);
}

TEST_F(Cli, MissingInputIsValidationError) {
  EXPECT_EQ(invoke({"rjcd", "--judgments", (dir_ / "nope.csv").string(), "--out", out_dir()}),
            kValidation);
  EXPECT_NE(err_.str().find("nope.csv"), std::string::npos);
  EXPECT_EQ(invoke({"rjcd", "--out", out_dir()}), kValidation);
}

TEST_F(Cli, EmptyJudgmentsFileIsValidationError) {
  const auto empty = write("empty.csv", "");
  EXPECT_EQ(invoke({"rjcd", "--judgments", empty.string(), "--out", out_dir()}), kValidation);
  const auto header_only = write("header.csv", "query_id,rank,assessor_id,label\n");
  EXPECT_EQ(invoke({"rjcd", "--judgments", header_only.string(), "--out", out_dir()}), kValidation);
}

TEST_F(Cli, BadLabelNamesLine) {
  const auto bad = write("bad.csv", "query_id,rank,assessor_id,label\nq,1,1,R\nq,1,2,Maybe\n");
  EXPECT_EQ(invoke({"rjcd", "--judgments", bad.string(), "--out", out_dir()}), kValidation);
  EXPECT_NE(err_.str().find("bad.csv:3:"), std::string::npos) << err_.str();
}

TEST_F(Cli, EvalOnFixture) {
  ASSERT_EQ(invoke({"eval", "--judgments", fixture("resume_judgments.csv"), "--rerank-run",
                    fixture("resume_rerank_run.csv"), "--snippets", fixture("resume_snippets.csv"),
                    "--queries", fixture("resume_queries.csv"), "--out", out_dir()}),
            kOk)
      << err_.str();
  const auto profile = lines_of(slurp(dir_ / "out" / "profile_resume_baseline.csv"));
  EXPECT_EQ(profile.size(), 11u);
  const auto curve = lines_of(slurp(dir_ / "out" / "pr_resume_baseline.csv"));
  ASSERT_GT(curve.size(), 10u);
  EXPECT_EQ(curve[10], "12,0.3030,0.8333");
  const auto summary = lines_of(slurp(dir_ / "out" / "summary.csv"));
  ASSERT_EQ(summary.size(), 2u);
  const auto [meta, reranked] = testing::published_profile_means();
  EXPECT_EQ(summary[1], "resume,0.0069,1,145," + rjcd::format_fixed4(meta) + "," +
                            rjcd::format_fixed4(reranked) + "," +
                            rjcd::format_fixed4(reranked - meta));
  EXPECT_EQ(lines_of(slurp(dir_ / "out" / "precision_at_10.csv"))[1], "resume,10,0.8000,0.8000");
}

TEST_F(Cli, EvalWithoutRunHasZeroImprovement) {
  ASSERT_EQ(invoke({"eval", "--judgments", fixture("resume_judgments.csv"), "--out", out_dir()}), kOk);
  const auto summary = lines_of(slurp(dir_ / "out" / "summary.csv"));
  const std::string meta = rjcd::format_fixed4(testing::published_profile_means().first);
  EXPECT_EQ(summary[1], "resume,0.0069,1,145," + meta + "," + meta + ",0.0000");
}

TEST_F(Cli, TiesNeedOverrides) {
  const auto j = write("j.csv",
                       "query_id,rank,assessor_id,label\n"
                       "q,1,1,R\nq,1,2,R\nq,2,1,P\nq,2,2,N\nq,3,1,R\nq,3,2,I\n");
  EXPECT_EQ(invoke({"eval", "--judgments", j.string(), "--out", out_dir()}), kUnresolvedTies);
  EXPECT_NE(err_.str().find("'q' rank 3"), std::string::npos) << err_.str();

  const auto o = write("o.csv", "query_id,rank,verdict\nq,3,relevant\n");
  EXPECT_EQ(invoke({"eval", "--judgments", j.string(), "--overrides", o.string(), "--out", out_dir()}),
            kOk)
      << err_.str();
}

TEST_F(Cli, GateExcludesFixture) {
  ASSERT_EQ(invoke({"gate", "--judgments", fixture("resume_judgments.csv"), "--out", out_dir()}), kOk);
  EXPECT_EQ(slurp(dir_ / "out" / "gate.csv"), "query_id,rho,decision\nresume,0.0069,excluded\n");
  ASSERT_EQ(invoke({"gate", "--judgments", fixture("resume_judgments.csv"), "--threshold", "0.005",
                    "--out", out_dir()}),
            kOk);
  EXPECT_EQ(slurp(dir_ / "out" / "gate.csv"), "query_id,rho,decision\nresume,0.0069,kept\n");
  EXPECT_EQ(invoke({"gate", "--judgments", fixture("resume_judgments.csv"), "--threshold", "1.5",
                    "--out", out_dir()}),
            kValidation);
}

TEST_F(Cli, CorrelateLinearPairs) {
  const auto pairs = write("pairs.csv", "query_id,rho,improvement\na,0.1,0.3\nb,0.2,0.5\nc,0.4,0.9\n");
  ASSERT_EQ(invoke({"correlate", "--pairs", pairs.string(), "--out", out_dir()}), kOk) << err_.str();
  const auto lines = lines_of(slurp(dir_ / "out" / "correlation.csv"));
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[1].substr(0, 9), "3,1.0000,");

  const auto flat = write("flat.csv", "rho,improvement\n0.1,0.3\n0.1,0.5\n0.1,0.9\n");
  EXPECT_EQ(invoke({"correlate", "--pairs", flat.string(), "--out", out_dir()}), kNumeric);
  const auto two = write("two.csv", "rho,improvement\n0.1,0.3\n0.2,0.5\n");
  EXPECT_EQ(invoke({"correlate", "--pairs", two.string(), "--out", out_dir()}), kValidation);
}

TEST_F(Cli, SimulateUnanimousPanels) {
  ASSERT_EQ(invoke({"simulate", "--p-unanimous", "1", "--items", "40", "--seeds", "2",
                    "--write-judgments", "--out", out_dir()}),
            kOk)
      << err_.str();
  const auto sweep = lines_of(slurp(dir_ / "out" / "sweep.csv"));
  ASSERT_EQ(sweep.size(), 3u);
  EXPECT_EQ(sweep[1], "1.0000,0,1.0000,40,40");
  EXPECT_EQ(sweep[2], "1.0000,1,1.0000,40,40");
  EXPECT_TRUE(fs::exists(dir_ / "out" / "judgments.csv"));

  EXPECT_EQ(invoke({"simulate", "--p-unanimous", "1.5", "--out", out_dir()}), kValidation);
}

TEST_F(Cli, SimulatedJudgmentsFeedBackIn) {
  ASSERT_EQ(invoke({"simulate", "--p-unanimous", "0,0.5", "--write-judgments", "--out", out_dir()}), kOk);
  const std::string sweep = slurp(dir_ / "out" / "sweep.csv");
  ASSERT_EQ(invoke({"rjcd", "--judgments", (dir_ / "out" / "judgments.csv").string(), "--out",
                    (dir_ / "again").string()}),
            kOk);
  const auto a = lines_of(sweep);
  const auto b = lines_of(slurp(dir_ / "again" / "rjcd.csv"));
  ASSERT_EQ(b.size(), a.size());
  for (std::size_t i = 1; i < a.size(); ++i) {
    // sweep: p,seed,rho,AN,JN   rjcd: id,rho,AN,JN
    EXPECT_EQ(a[i].substr(a[i].find(',', a[i].find(',') + 1) + 1), b[i].substr(b[i].find(',') + 1));
  }
}

TEST_F(Cli, RerankWritesPermutation) {
  ASSERT_EQ(invoke({"rerank", "--snippets", fixture("resume_snippets.csv"), "--corpus",
                    fixture("toy_corpus.tsv"), "--profiles", fixture("resume_profiles.csv"), "--out",
                    out_dir()}),
            kOk)
      << err_.str();
  const auto lines = lines_of(slurp(dir_ / "out" / "reranked.csv"));
  ASSERT_EQ(lines.size(), 51u);
  EXPECT_EQ(lines[0], "query_id,new_rank,original_rank,topic");
  EXPECT_EQ(lines[1].rfind("resume,1,", 0), 0u);

  EXPECT_EQ(invoke({"rerank", "--snippets", fixture("resume_snippets.csv"), "--out", out_dir()}),
            kValidation);
}

TEST_F(Cli, ReportEndToEnd) {
  ASSERT_EQ(invoke({"report", "--judgments", fixture("resume_judgments.csv"), "--snippets",
                    fixture("resume_snippets.csv"), "--queries", fixture("resume_queries.csv"),
                    "--corpus", fixture("toy_corpus.tsv"), "--profiles", fixture("resume_profiles.csv"),
                    "--out", out_dir()}),
            kOk)
      << err_.str();
  for (const char* name : {"reranked.csv", "rjcd.csv", "summary.csv", "precision_at_10.csv",
                           "gate.csv", "pr_curves.svg", "improvement_vs_rjcd.svg",
                           "pr_resume_reranked.csv", "profile_resume_reranked.csv"}) {
    EXPECT_TRUE(fs::exists(dir_ / "out" / name)) << name;
  }
  // one query cannot be correlated
  EXPECT_FALSE(fs::exists(dir_ / "out" / "correlation.csv"));
  EXPECT_NE(out_.str().find("correlation skipped"), std::string::npos);
}

TEST_F(Cli, ConfigFileSuppliesDefaults) {
  const auto cfg = write("run.ini", "[gate]\njudgments=\"" + fixture("resume_judgments.csv") +
                                        "\"\nthreshold=0.001\nout=\"" + out_dir() + "\"\n");
  ASSERT_EQ(invoke({"--config", cfg.string(), "gate"}), kOk) << err_.str();
  EXPECT_NE(slurp(dir_ / "out" / "gate.csv").find("kept"), std::string::npos);
}

TEST_F(Cli, HelpAndUsage) {
  EXPECT_EQ(invoke({"--help"}), kOk);
  EXPECT_NE(out_.str().find("simulate"), std::string::npos);
  EXPECT_EQ(invoke({"eval", "--help"}), kOk);
  EXPECT_NE(out_.str().find("--threshold"), std::string::npos);
  EXPECT_EQ(invoke({}), kValidation);
  EXPECT_EQ(invoke({"frobnicate"}), kValidation);
  EXPECT_EQ(invoke({"rjcd", "--k", "zero"}), kValidation);
}

}  // namespace
}  // namespace rjcd::cli
