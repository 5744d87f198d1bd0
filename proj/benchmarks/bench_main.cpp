#include <benchmark/benchmark.h>

#include <random>

#include "fixtures.hpp"
#include "gen/alignment.hpp"
#include "gen/generation.hpp"
#include "gen/metrics.hpp"
#include "gen/session.hpp"
#include "oracles.hpp"

using namespace gen;

namespace {

std::vector<std::vector<double>> square_matrix(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> d(0, 8);
  std::vector<std::vector<double>> cells(n, std::vector<double>(n));
  for (auto& row : cells)
    for (auto& v : row) v = d(rng) / 8.0;
  return cells;
}

void BM_Alignment(benchmark::State& state) {
  const auto m = ScoreMatrix::from_cells(square_matrix(static_cast<std::size_t>(state.range(0)), 7));
  for (auto _ : state) benchmark::DoNotOptimize(best_alignment(m).total_score);
}
BENCHMARK(BM_Alignment)->RangeMultiplier(2)->Range(4, 64);

void BM_Acquisition(benchmark::State& state) {
  const Equivalence eq(fixtures::resources(), EquivConfig::acquisition());
  const auto seeds = fixtures::bootstrap_seeds();
  for (auto _ : state) benchmark::DoNotOptimize(acquire_patterns(seeds, eq).patterns.size());
}
BENCHMARK(BM_Acquisition);

void BM_GenerateBatch(benchmark::State& state) {
  const Equivalence acq(fixtures::resources(), EquivConfig::acquisition());
  const Equivalence gen_eq(fixtures::resources(), EquivConfig::generation());
  const auto patterns = acquire_patterns(fixtures::bootstrap_seeds(), acq).patterns;
  const auto syn = fixtures::synthetic(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(generate_batch(patterns, syn.corpus, all_strategies(), gen_eq).size());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GenerateBatch)->Arg(10)->Arg(30);

void BM_Bleu4(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::vector<Words> cands;
  std::vector<std::vector<Words>> refs;
  for (int i = 0; i < state.range(0); ++i) {
    cands.push_back(oracles::random_words(rng, 12));
    refs.push_back({oracles::random_words(rng, 12), oracles::random_words(rng, 12)});
  }
  for (auto _ : state) benchmark::DoNotOptimize(bleu(cands, refs, 4));
}
BENCHMARK(BM_Bleu4)->Arg(20)->Arg(200);

void BM_EvaluateTopN(benchmark::State& state) {
  std::mt19937_64 rng(5);
  std::vector<Words> ranked, refs;
  for (int i = 0; i < 50; ++i) ranked.push_back(oracles::random_words(rng, 12));
  for (int i = 0; i < 20; ++i) refs.push_back(oracles::random_words(rng, 12));
  for (auto _ : state)
    benchmark::DoNotOptimize(evaluate_topn(ranked, refs, {5, 10, 20}, &fixtures::resources().embeddings));
}
BENCHMARK(BM_EvaluateTopN);

void BM_SimulatedSession(benchmark::State& state) {
  const auto syn = fixtures::synthetic(30);
  SessionConfig cfg;
  cfg.batch_size = 5;
  cfg.weighing.strategy = WeighingStrategy::EWAF;
  cfg.weighing.penalty = 0.1;
  const auto oracle = FeedbackOracle::reference_based(syn.reference);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        run_session(syn.corpus, syn.seeds, cfg, fixtures::resources(), oracle, &syn.reference).report.stats.size());
}
BENCHMARK(BM_SimulatedSession)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
