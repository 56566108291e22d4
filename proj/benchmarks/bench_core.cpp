#include <benchmark/benchmark.h>

#include <filesystem>
#include <random>

#include "rjcd/data_io.hpp"
#include "rjcd/judgment.hpp"
#include "rjcd/metrics.hpp"
#include "rjcd/panel_sim.hpp"
#include "rjcd/reranker.hpp"

namespace {

using namespace rjcd;

const std::filesystem::path kData = RJCD_TEST_DATA_DIR;

void BM_Rjcd(benchmark::State& state) {
  PanelConfig cfg;
  cfg.items = static_cast<std::size_t>(state.range(0));
  cfg.p_unanimous = 0.3;
  const JudgmentMatrix m = simulate_panel(cfg);
  for (auto _ : state) benchmark::DoNotOptimize(rjcd::rjcd(m));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Rjcd)->Arg(50)->Arg(1000)->Arg(100000);

void BM_SimulatePanel(benchmark::State& state) {
  PanelConfig cfg;
  cfg.items = static_cast<std::size_t>(state.range(0));
  cfg.p_unanimous = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_panel(cfg));
    ++cfg.seed;
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulatePanel)->Arg(1000)->Arg(100000);

void BM_InterpolatedProfile(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::vector<bool> ranked(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < ranked.size(); ++i) ranked[i] = (rng() & 3) != 0;
  const auto hits = static_cast<std::size_t>(std::count(ranked.begin(), ranked.end(), true));
  for (auto _ : state) benchmark::DoNotOptimize(interpolated_profile(pr_curve(ranked, hits)));
}
BENCHMARK(BM_InterpolatedProfile)->Arg(50)->Arg(10000);

void BM_Pearson(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> noise;
  std::vector<double> x(static_cast<std::size_t>(state.range(0)));
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = noise(rng);
    y[i] = x[i] + noise(rng);
  }
  for (auto _ : state) benchmark::DoNotOptimize(pearson(x, y));
}
BENCHMARK(BM_Pearson)->Arg(30)->Arg(10000);

void BM_TrainNb(benchmark::State& state) {
  const auto corpus = load_corpus(kData / "toy_corpus.tsv");
  for (auto _ : state) benchmark::DoNotOptimize(train_nb(corpus));
}
BENCHMARK(BM_TrainNb);

void BM_RerankQuery(benchmark::State& state) {
  const NbModel model = train_nb(load_corpus(kData / "toy_corpus.tsv"));
  const auto lists = load_snippets(kData / "resume_snippets.csv");
  const PreferenceProfile profile(OdpTopic::kBusiness, OdpTopic::kReference);
  for (auto _ : state) benchmark::DoNotOptimize(rerank_query(lists.at(0).snippets, model, profile, {}));
}
BENCHMARK(BM_RerankQuery);

}  // namespace

BENCHMARK_MAIN();
