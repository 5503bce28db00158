// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Every check runs offline.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>
#include <string>

#include "ccv/dataset.hpp"
#include "ccv/error.hpp"
#include "ccv/hash.hpp"
#include "ccv/inference.hpp"
#include "ccv/model_io.hpp"
#include "ccv/pipeline.hpp"
#include "ccv/synth.hpp"
#include "oracles.hpp"

using namespace ccv;
using Clock = std::chrono::steady_clock;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(const std::string& name, const std::function<Verdict()>& check) {
  const auto t0 = Clock::now();
  Verdict v;
  try {
    v = check();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  char timing[32];
  std::snprintf(timing, sizeof timing, "%.2fs", secs);
  std::cout << (v.pass ? "PASS " : "FAIL ") << name << " [" << timing << "] " << v.detail << std::endl;
  if (!v.pass) ++failures;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  return buf;
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

const std::vector<DescriptionRecord>& benchmark_corpus() {
  static const auto records = synthesize_corpus(SynthOptions{}, Vocabulary{});
  return records;
}

Verdict table_fidelity() {
  const auto t0 = Clock::now();
  const auto colors = default_color_lexicon();
  std::size_t matched = 0;
  std::set<std::string> groups;
  for (const auto& [term, group] : oracle::color_table()) {
    if (map_color_term(colors, term) == group) ++matched;
    groups.insert(map_color_term(colors, term));
  }
  const auto& rows = oracle::color_table();
  std::set<std::string> distinct;
  for (const auto& [t, _] : rows) distinct.insert(t);
  const std::size_t non_sentinel = colors.label_set().size() - 1;
  const double secs = seconds_since(t0);
  const bool ok = matched == rows.size() && groups.size() == 12 && non_sentinel == 12 &&
                  colors.terms().size() == distinct.size() && secs < 1.0;
  return {ok, std::to_string(matched) + "/" + std::to_string(rows.size()) + " table rows (" +
                  std::to_string(distinct.size()) + " distinct terms) map exactly; " + std::to_string(groups.size()) +
                  " groups"};
}

Verdict gradient_oracle() {
  const auto t0 = Clock::now();
  LabelSet labels(AttributeKind::Color, {"a", "b", "c", "none"}, "none");
  auto model = MlpClassifier::initialized(8, 6, 5, labels, "oracle", 2024);
  Rng rng(77);
  for (auto& L : model.layers()) {
    for (auto& b : L.bias) b = rng.uniform(-0.5, 0.5);
  }
  std::vector<Vector> xs(8, Vector(8));
  std::vector<Example> batch;
  for (auto& x : xs) {
    for (auto& v : x) v = rng.uniform(-1, 1);
  }
  for (const auto& x : xs) batch.push_back({x, rng.below(4)});
  const auto analytic = loss_and_gradients(model, batch);
  const double h = 1e-5;
  double worst = 0.0;
  std::size_t checked = 0;
  for (std::size_t l = 0; l < 3; ++l) {
    auto& L = model.layers()[l];
    const auto& G = analytic.gradients[l];
    auto check = [&](double& p, double g) {
      const double saved = p;
      p = saved + h;
      const double up = mean_loss(model, batch);
      p = saved - h;
      const double down = mean_loss(model, batch);
      p = saved;
      const double numeric = (up - down) / (2 * h);
      worst = std::max(worst, std::abs(numeric - g) / std::max(1e-8, std::abs(numeric) + std::abs(g)));
      ++checked;
    };
    for (std::size_t i = 0; i < L.weight.size(); ++i) check(L.weight[i], G.weight[i]);
    for (std::size_t i = 0; i < L.bias.size(); ++i) check(L.bias[i], G.bias[i]);
  }
  const double secs = seconds_since(t0);
  return {worst < 1e-4 && secs < 10.0 && checked == model.parameter_count(),
          std::to_string(checked) + " parameters, max relative error " + std::to_string(worst)};
}

Verdict softmax_contracts() {
  LabelSet labels(AttributeKind::Color, {"a", "b", "c", "d", "e", "none"}, "none");
  auto model = MlpClassifier::initialized(32, 16, 8, labels, "oracle", 5);
  Rng rng(6);
  double worst = 0.0;
  bool nonneg = true;
  Vector x(32);
  for (int i = 0; i < 1000; ++i) {
    const double scale = std::pow(10.0, static_cast<double>(rng.below(4)));
    for (auto& v : x) v = rng.uniform(-scale, scale);
    const auto p = model.forward(x);
    worst = std::max(worst, std::abs(std::accumulate(p.begin(), p.end(), 0.0) - 1.0));
    nonneg &= std::all_of(p.begin(), p.end(), [](double v) { return v >= 0.0; });
  }
  return {worst < 1e-9 && nonneg, "1000 passes, all p >= 0, max |sum p - 1| = " + sci(worst)};
}

Verdict analytic_losses() {
  LabelSet labels(AttributeKind::Color, {"a", "b", "c", "d", "none"}, "none");
  MlpClassifier confident(4, 3, 3, labels, "oracle");
  confident.layers()[2].bias = {-60, 60, -60, -60, -60};
  Vector x(4, 0.3);
  std::vector<Example> one{{x, 1}};
  const double lc = mean_loss(confident, one);
  MlpClassifier uniform(4, 3, 3, labels, "oracle");
  std::vector<Example> any{{x, 0}, {x, 3}, {x, 4}};
  const double lu = mean_loss(uniform, any);
  const double err = std::abs(lu - std::log(5.0));
  return {lc < 1e-12 && err < 1e-9, "one-hot loss " + sci(lc) + ", uniform |loss - ln 5| " + sci(err)};
}

Verdict leakage() {
  PipelineConfig cfg;
  std::size_t checked = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    cfg.override_seeds(seed);
    Pipeline p(cfg);
    const auto split = p.split(benchmark_corpus());
    assert_disjoint(split.train_ids, split.test_ids, "corpus split");
    const auto train = select(benchmark_corpus(), split.train_ids);
    const auto test = select(benchmark_corpus(), split.test_ids);
    auto data = p.training_data(train, AttributeKind::Color);
    auto test_ds = p.test_data(test, AttributeKind::Color);
    assert_no_leakage(data.full, test_ds);
    assert_no_leakage(data.train, data.validation);
    std::set<std::string> a = data.full.description_ids(), b = test_ds.description_ids();
    std::vector<std::string> both;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(both));
    if (!both.empty()) return {false, "seed " + std::to_string(seed) + " shares " + both.front()};
    ++checked;
  }
  return {checked == 50, "50 seeds, train/test description ids disjoint after augmentation"};
}

Verdict augmentation_arithmetic() {
  OfflineProvider provider;
  Translator translator(provider);
  Vocabulary vocab;
  std::vector<DescriptionRecord> records(benchmark_corpus().begin(), benchmark_corpus().begin() + 380);
  const auto chains = default_chains();
  auto whole3 = build_sentence_dataset(records, AttributeKind::Color, chains, translator, vocab, {false});
  auto whole0 = build_sentence_dataset(records, AttributeKind::Color, {}, translator, vocab, {false});
  auto sent3 = build_sentence_dataset(records, AttributeKind::Color, chains, translator, vocab);
  auto sent0 = build_sentence_dataset(records, AttributeKind::Color, {}, translator, vocab);
  const bool ok = whole3.size() == 4 * records.size() && whole0.size() == records.size() &&
                  sent3.size() == 4 * sent0.size();
  return {ok, std::to_string(records.size()) + " descriptions -> " + std::to_string(whole3.size()) + " (3 chains), " +
                  std::to_string(whole0.size()) + " (0 chains); sentences " + std::to_string(sent0.size()) + " -> " +
                  std::to_string(sent3.size())};
}

Verdict undersampling() {
  PipelineConfig cfg;
  Pipeline p(cfg);
  const auto split = p.split(benchmark_corpus());
  auto full = p.training_data(select(benchmark_corpus(), split.train_ids), AttributeKind::Color).full;
  const auto before = distribution(full);
  const auto sentinel = full.label_set.sentinel();
  const auto expected = static_cast<std::size_t>(std::llround(0.15 * static_cast<double>(before.counts.at(sentinel))));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto after = distribution(undersample_sentinel(full, 0.15, seed));
    if (after.counts.at(sentinel) != expected) return {false, "seed " + std::to_string(seed) + " kept wrong count"};
    for (const auto& [label, n] : before.counts) {
      if (label != sentinel && after.counts.at(label) != n) return {false, "seed " + std::to_string(seed) + " changed " + label};
    }
  }
  return {true, "20 seeds, sentinel " + std::to_string(before.counts.at(sentinel)) + " -> " + std::to_string(expected) +
                    ", other classes unchanged"};
}

VariantPrediction vote(std::size_t label, double p, std::size_t variant) {
  VariantPrediction v;
  v.description_id = "d";
  v.variant_index = variant;
  v.label = label;
  v.probability = p;
  v.probabilities = {0, 0, 0};
  v.probabilities[label] = p;
  return v;
}

Verdict aggregation_oracles(const RunResult& run) {
  const std::vector<double> probs = {0.9, 0.6, 0.75, 0.6};
  std::size_t cases = 0;
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto combos = static_cast<std::size_t>(std::pow(3, n));
    for (std::size_t code = 0; code < combos; ++code) {
      std::vector<std::size_t> labels;
      std::vector<double> ps;
      std::vector<VariantPrediction> vs;
      for (std::size_t i = 0, c = code; i < n; ++i, c /= 3) {
        labels.push_back(c % 3);
        ps.push_back(probs[i]);
        vs.push_back(vote(c % 3, probs[i], i));
      }
      if (aggregate_variants(vs).label != oracle::plurality(labels, ps)) {
        return {false, "vote multiset " + std::to_string(code) + " of size " + std::to_string(n) + " disagrees"};
      }
      ++cases;
    }
  }
  Rng rng(12);
  for (int t = 0; t < 500; ++t) {
    Vector p(8);
    for (auto& x : p) x = static_cast<double>(rng.below(5));
    for (std::size_t k = 1; k < p.size(); ++k) {
      auto a = top_k_labels(p, k), b = top_k_labels(p, k + 1);
      if (!std::equal(a.begin(), a.end(), b.begin())) return {false, "top-k prefix property violated"};
    }
  }
  for (const auto& r : run.runs) {
    std::vector<std::size_t> golds;
    std::vector<std::vector<std::size_t>> rankings;
    const auto& labels = r.trained.model.labels();
    const auto test = select(benchmark_corpus(), run.split.test_ids);
    for (std::size_t i = 0; i < test.size(); ++i) {
      golds.push_back(labels.index_of(test[i].gold(r.attribute)));
      rankings.push_back(r.evaluation.predictions[i].ranking);
    }
    double prev = 0.0;
    for (std::size_t k = 1; k <= labels.size(); ++k) {
      const double a = top_k_accuracy(golds, rankings, k);
      if (a < prev) return {false, "top-k accuracy decreased at k=" + std::to_string(k)};
      prev = a;
    }
    if (prev != 1.0) return {false, "top-c accuracy " + fmt(prev)};
  }
  return {true, std::to_string(cases) + " vote multisets match enumeration; top-k prefix-monotone; top-k accuracy "
                                         "non-decreasing to 1.0 at k=c"};
}

Verdict metrics_fixture() {
  const auto report = metrics(oracle::color_fixture());
  auto r2 = [](double x) { return std::round(x * 100) / 100; };
  std::size_t rows = 0;
  for (const auto& want : oracle::color_performance()) {
    auto it = std::find_if(report.classes.begin(), report.classes.end(),
                           [&](const ClassMetrics& c) { return c.label == want.label; });
    if (it == report.classes.end() || r2(it->precision) != want.precision || r2(it->recall) != want.recall ||
        r2(it->f1) != want.f1 || it->support != want.support) {
      return {false, "row " + want.label + " differs"};
    }
    ++rows;
  }
  const bool ok = r2(report.accuracy) == 0.91 && report.total == 76;
  return {ok, std::to_string(rows) + " rows reproduced to 2 decimals, accuracy " + fmt(report.accuracy) + " over " +
                  std::to_string(report.total)};
}

struct Artifacts {
  std::vector<std::string> models, predictions, reports;
};

Artifacts artifacts_of(const RunResult& run) {
  Artifacts a;
  std::vector<std::string> ids;
  for (const auto& r : select(benchmark_corpus(), run.split.test_ids)) ids.push_back(r.id);
  std::map<AttributeKind, std::vector<DescriptionPrediction>> preds;
  for (const auto& r : run.runs) {
    const auto bytes = encode_model(r.trained.model);
    a.models.emplace_back(reinterpret_cast<const char*>(bytes.data()), bytes.size());
    a.reports.push_back(report_json(r.evaluation.report) + train_report_json(r.trained.report));
    preds[r.attribute] = r.evaluation.predictions;
  }
  a.predictions.push_back(predictions_jsonl(ids, preds, true));
  return a;
}

}  // namespace

int main() {
  std::cout << "acceptance suite" << std::endl;
  criterion("color table fidelity", table_fidelity);
  criterion("gradient oracle", gradient_oracle);
  criterion("softmax and probability contracts", softmax_contracts);
  criterion("analytic losses", analytic_losses);
  criterion("leakage guard", leakage);
  criterion("augmentation arithmetic", augmentation_arithmetic);
  criterion("undersampling", undersampling);
  criterion("metrics fixture", metrics_fixture);

  PipelineConfig config;
  RunResult first;
  double first_secs = 0.0;
  criterion("end-to-end synthetic benchmark", [&]() -> Verdict {
    const auto t0 = Clock::now();
    Pipeline tokenized(config);
    first = tokenized.run(benchmark_corpus());
    first_secs = seconds_since(t0);
    PipelineConfig whole = config;
    whole.tokenize = false;
    Pipeline untokenized(whole);
    const auto baseline = untokenized.run(benchmark_corpus());
    const double secs = seconds_since(t0);
    const double color = first.run(AttributeKind::Color).evaluation.report.accuracy;
    const double work = first.run(AttributeKind::WorkType).evaluation.report.accuracy;
    const double color_whole = baseline.run(AttributeKind::Color).evaluation.report.accuracy;
    const auto& top = first.run(AttributeKind::Color).evaluation.report.top_k;
    std::ostringstream d;
    d << "color " << fmt(color) << " (>= 0.90), work type " << fmt(work) << " (>= 0.85), color top-3 "
      << fmt(top.at(3)) << ", whole-description color " << fmt(color_whole) << " (< " << fmt(color) << "), "
      << first.run(AttributeKind::Color).evaluation.report.total << " test descriptions";
    return {color >= 0.90 && work >= 0.85 && color_whole < color && secs < 300.0, d.str()};
  });
  criterion("aggregation oracles", [&] { return aggregation_oracles(first); });
  criterion("determinism", [&]() -> Verdict {
    if (first.runs.empty()) return {false, "benchmark run missing"};
    Pipeline again(config);
    const auto second = again.run(benchmark_corpus());
    const auto a = artifacts_of(first), b = artifacts_of(second);
    const bool ok = a.models == b.models && a.predictions == b.predictions && a.reports == b.reports;
    return {ok, "two runs: models, predictions and reports byte-identical (" + fmt(first_secs) + "s per run)"};
  });

  std::cout << (failures ? "FAILED: " + std::to_string(failures) + " criteria" : std::string("all criteria passed"))
            << std::endl;
  return failures ? 1 : 0;
}
