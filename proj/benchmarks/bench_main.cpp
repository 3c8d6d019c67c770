// Microbenchmarks for the hot paths: cleaning, neighbor queries, sentence
// augmentation, and the trainer. All inputs are synthetic so the binary has
// no file dependencies.

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "sarcaug/sarcaug.hpp"

namespace {

using namespace sarcaug;

EmbeddingTable random_table(std::size_t vocab, int dim, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<std::pair<std::string, std::vector<float>>> rows;
  rows.reserve(vocab);
  for (std::size_t w = 0; w < vocab; ++w) {
    std::vector<float> v(static_cast<std::size_t>(dim));
    for (auto& x : v) x = static_cast<float>(rng.unit() * 2.0 - 1.0);
    rows.emplace_back("w" + std::to_string(w), std::move(v));
  }
  return EmbeddingTable::from_rows(dim, rows);
}

const std::string kNoisyTweet =
    "Sooooo haaaappy about Monday mornings!!! (as always) check "
    "https://t.co/abc123 via @someone #blessed #sarcasm can't wait \U0001F602";

void bm_normalize(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(normalize(kNoisyTweet));
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations()) *
                          static_cast<int64_t>(kNoisyTweet.size()));
}
BENCHMARK(bm_normalize);

void bm_clean(benchmark::State& state) {
  const PipelineConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(clean(kNoisyTweet, cfg));
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations()) *
                          static_cast<int64_t>(kNoisyTweet.size()));
}
BENCHMARK(bm_clean);

void bm_full_pipeline(benchmark::State& state) {
  const PipelineConfig cfg;
  for (auto _ : state)
    benchmark::DoNotOptimize(trim(clean(normalize(kNoisyTweet), cfg), cfg.max_len_tokens));
}
BENCHMARK(bm_full_pipeline);

void bm_knn(benchmark::State& state) {
  static const EmbeddingTable small = random_table(4096, 50, 1);
  static const EmbeddingTable large = random_table(32768, 50, 2);
  const EmbeddingTable& t = state.range(0) == 4096 ? small : large;
  std::size_t q = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(nearest_neighbors(t, t.word(q), 5, 0.0));
    q = (q + 97) % t.size();
  }
}
BENCHMARK(bm_knn)->Arg(4096)->Arg(32768);

void bm_knn_unit_rows(benchmark::State& state) {
  static const EmbeddingTable table = [] {
    EmbeddingTable t = random_table(32768, 50, 2);
    t.precompute_unit_rows();
    return t;
  }();
  std::size_t q = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(nearest_neighbors(table, table.word(q), 5, 0.0));
    q = (q + 97) % table.size();
  }
}
BENCHMARK(bm_knn_unit_rows);

void bm_augment_sentence(benchmark::State& state) {
  static const EmbeddingTable table = random_table(2048, 50, 3);
  AugmentPolicy policy;
  policy.min_similarity = 0.0;  // random vectors rarely clear the default bar
  std::string text;
  for (int i = 0; i < 10; ++i) text += (i ? " w" : "w") + std::to_string(i * 13);
  SplitMix64 rng(9);
  for (auto _ : state)
    benchmark::DoNotOptimize(augment_sentence(text, table, policy, rng));
}
BENCHMARK(bm_augment_sentence);

void bm_featurize(benchmark::State& state) {
  static const EmbeddingTable table = random_table(2048, 50, 4);
  std::string text;
  for (int i = 0; i < 20; ++i) text += (i ? " w" : "w") + std::to_string(i * 31);
  for (auto _ : state) benchmark::DoNotOptimize(featurize(text, table, 40));
}
BENCHMARK(bm_featurize);

void bm_train(benchmark::State& state) {
  static const EmbeddingTable table = random_table(512, 16, 5);
  static const std::vector<Sample> data = [] {
    std::vector<Sample> samples;
    SplitMix64 rng(6);
    for (int i = 0; i < 200; ++i) {
      Sample s;
      s.id = "s" + std::to_string(i);
      s.text = "w" + std::to_string(rng.below(512)) + " w" + std::to_string(rng.below(512));
      s.label = i % 2 ? Label::positive : Label::negative;
      samples.push_back(std::move(s));
    }
    return samples;
  }();
  ClassifierConfig cfg;
  cfg.num_train_epochs = 1;
  for (auto _ : state) benchmark::DoNotOptimize(train(data, cfg, table, nullptr));
}
BENCHMARK(bm_train);

}  // namespace

BENCHMARK_MAIN();
