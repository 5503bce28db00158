#include <benchmark/benchmark.h>

#include "ccv/augment.hpp"
#include "ccv/embedding.hpp"
#include "ccv/hash.hpp"
#include "ccv/mlp.hpp"
#include "ccv/preprocess.hpp"
#include "ccv/synth.hpp"

using namespace ccv;

namespace {

const std::string kSentence = "cream taffeta, white netting with cream flocked and floral design";

void BM_HashingEmbed(benchmark::State& state) {
  HashingEmbedder e(512);
  for (auto _ : state) benchmark::DoNotOptimize(e.embed(kSentence));
}
BENCHMARK(BM_HashingEmbed);

void BM_FindMentions(benchmark::State& state) {
  Vocabulary v;
  for (auto _ : state) benchmark::DoNotOptimize(v.color.find_mentions(kSentence));
}
BENCHMARK(BM_FindMentions);

void BM_NormalizeTokenize(benchmark::State& state) {
  const std::string text =
      "65.3.35 White and cream formal dress. Fully covered in netting and lace. Cream taffeta, white netting with "
      "cream flocked and floral design.";
  for (auto _ : state) benchmark::DoNotOptimize(tokenize_sentences(normalize(text)));
}
BENCHMARK(BM_NormalizeTokenize);

void BM_OfflineBackTranslate(benchmark::State& state) {
  OfflineProvider p;
  Translator t(p);
  const AugmentationChain chain{1, "fr"};
  for (auto _ : state) benchmark::DoNotOptimize(back_translate(kSentence, chain, t));
}
BENCHMARK(BM_OfflineBackTranslate);

MlpClassifier bench_model() {
  return MlpClassifier::initialized(512, 256, 64, default_color_lexicon().label_set(), "hashing", 1);
}

void BM_Forward(benchmark::State& state) {
  auto m = bench_model();
  HashingEmbedder e(512);
  const auto x = e.embed(kSentence);
  for (auto _ : state) benchmark::DoNotOptimize(m.forward(x));
}
BENCHMARK(BM_Forward);

void BM_ForwardDense(benchmark::State& state) {
  auto m = bench_model();
  Rng rng(1);
  Vector x(512);
  for (auto& v : x) v = rng.uniform(-1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(m.forward(x));
}
BENCHMARK(BM_ForwardDense);

void BM_LossAndGradientsBatch8(benchmark::State& state) {
  auto m = bench_model();
  HashingEmbedder e(512);
  Vocabulary v;
  SynthOptions o;
  o.descriptions = 8;
  std::vector<Vector> xs;
  for (const auto& r : synthesize_corpus(o, v)) xs.push_back(e.embed(r.text));
  std::vector<Example> batch;
  for (std::size_t i = 0; i < xs.size(); ++i) batch.push_back({xs[i], i % m.num_classes()});
  for (auto _ : state) benchmark::DoNotOptimize(loss_and_gradients(m, batch));
}
BENCHMARK(BM_LossAndGradientsBatch8);

void BM_AdamStep(benchmark::State& state) {
  auto m = bench_model();
  AdamState s(m);
  std::vector<DenseLayer> g;
  for (const auto& L : m.layers()) g.emplace_back(L.in, L.out);
  for (auto _ : state) adam_step(s, m, g, {});
}
BENCHMARK(BM_AdamStep);

}  // namespace

BENCHMARK_MAIN();
