#include "ccv/inference.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "ccv/error.hpp"

namespace ccv {

std::vector<VariantPrediction> predict_variants(const MlpClassifier& model, EmbeddingBackend& backend,
                                                std::span<const SentenceSample> variants) {
  if (variants.empty()) throw EmptyDataset("no variants to classify");
  std::vector<VariantPrediction> out;
  out.reserve(variants.size());
  for (const auto& v : variants) {
    VariantPrediction p;
    p.description_id = v.description_id;
    p.sentence_index = v.sentence_index;
    p.variant_index = v.variant_index;
    p.text = v.text;
    p.probabilities = model.forward(embed(backend, v.text));
    p.label = argmax(p.probabilities);
    p.probability = p.probabilities[p.label];
    out.push_back(std::move(p));
  }
  return out;
}

SentencePrediction aggregate_variants(std::span<const VariantPrediction> predictions) {
  if (predictions.empty()) throw EmptyDataset("no variant predictions to aggregate");
  const auto& first = predictions.front();
  struct Tally {
    std::size_t votes = 0;
    double sum = 0.0;
  };
  std::map<std::size_t, Tally> tally;
  for (const auto& p : predictions) {
    if (p.description_id != first.description_id || p.sentence_index != first.sentence_index) {
      throw MixedProvenance("variant predictions from " + first.description_id + "#" +
                            std::to_string(first.sentence_index) + " and " + p.description_id + "#" +
                            std::to_string(p.sentence_index) + " cannot be aggregated together");
    }
    auto& t = tally[p.label];
    ++t.votes;
    t.sum += p.probability;
  }
  // std::map iterates labels in ascending order, so strict comparisons keep
  // the lowest index on a full tie.
  std::size_t best = tally.begin()->first;
  for (const auto& [label, t] : tally) {
    const auto& b = tally[best];
    const double mean = t.sum / static_cast<double>(t.votes);
    const double best_mean = b.sum / static_cast<double>(b.votes);
    if (t.votes > b.votes || (t.votes == b.votes && mean > best_mean)) best = label;
  }
  SentencePrediction s;
  s.description_id = first.description_id;
  s.sentence_index = first.sentence_index;
  s.label = best;
  s.probability = tally[best].sum / static_cast<double>(tally[best].votes);
  s.variants.assign(predictions.begin(), predictions.end());
  return s;
}

DescriptionPrediction aggregate_description(std::span<const SentencePrediction> sentences, const LabelSet& labels) {
  DescriptionPrediction d;
  d.attribute = labels.attribute();
  d.sentences.assign(sentences.begin(), sentences.end());
  if (!sentences.empty()) d.description_id = sentences.front().description_id;
  const std::size_t sentinel = labels.sentinel_index();

  struct Support {
    double sum = 0.0;
    std::size_t count = 0;
    std::size_t first_sentence = 0;
  };
  std::map<std::size_t, Support> support;
  Vector soft(labels.size(), 0.0);
  double sentinel_sum = 0.0;
  std::size_t sentinel_count = 0;
  for (const auto& s : sentences) {
    if (s.description_id != d.description_id) throw MixedProvenance("sentences from different descriptions");
    for (const auto& v : s.variants) {
      for (std::size_t k = 0; k < soft.size() && k < v.probabilities.size(); ++k) {
        soft[k] += v.probabilities[k] / static_cast<double>(s.variants.size());
      }
    }
    if (s.label == sentinel) {
      sentinel_sum += s.probability;
      ++sentinel_count;
      continue;
    }
    auto [it, inserted] = support.try_emplace(s.label, Support{0.0, 0, s.sentence_index});
    it->second.sum += s.probability;
    ++it->second.count;
    it->second.first_sentence = std::min(it->second.first_sentence, s.sentence_index);
  }

  std::vector<std::size_t> voted;
  for (const auto& [label, _] : support) voted.push_back(label);
  std::stable_sort(voted.begin(), voted.end(), [&](std::size_t a, std::size_t b) {
    const auto& sa = support[a];
    const auto& sb = support[b];
    if (sa.sum != sb.sum) return sa.sum > sb.sum;
    return sa.first_sentence < sb.first_sentence;
  });

  if (voted.empty()) {
    d.label = sentinel;
    d.probability = sentinel_count ? sentinel_sum / static_cast<double>(sentinel_count) : 0.0;
    d.ranking.push_back(sentinel);
  } else {
    d.label = voted.front();
    const auto& s = support[d.label];
    d.probability = s.sum / static_cast<double>(s.count);
    d.supporting_sentence = s.first_sentence;
    d.ranking = voted;
  }
  std::vector<std::size_t> rest;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    if (std::find(d.ranking.begin(), d.ranking.end(), k) == d.ranking.end()) rest.push_back(k);
  }
  std::stable_sort(rest.begin(), rest.end(), [&](std::size_t a, std::size_t b) { return soft[a] > soft[b]; });
  d.ranking.insert(d.ranking.end(), rest.begin(), rest.end());
  return d;
}

std::vector<std::size_t> top_k_labels(std::span<const double> probabilities, std::size_t k) {
  if (k == 0 || k > probabilities.size()) {
    throw InvalidK("k must lie in [1, " + std::to_string(probabilities.size()) + "], got " + std::to_string(k));
  }
  std::vector<std::size_t> idx(probabilities.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return probabilities[a] > probabilities[b]; });
  idx.resize(k);
  return idx;
}

DescriptionPrediction predict_description(std::string_view description_id, std::string_view text,
                                          const MlpClassifier& model, EmbeddingBackend& backend,
                                          const std::vector<AugmentationChain>& chains, Translator& translator,
                                          InferenceOptions options) {
  const auto normalized = normalize(text);
  std::vector<std::string> sentences;
  if (options.tokenize) {
    sentences = tokenize_sentences(normalized);
  } else if (auto whole = whole_description(normalized); !whole.empty()) {
    sentences.push_back(std::move(whole));
  }
  std::vector<SentencePrediction> per_sentence;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    auto texts = sentence_variants(sentences[i], chains, translator);
    std::vector<SentenceSample> variants;
    for (std::size_t v = 0; v < texts.size(); ++v) {
      variants.push_back({std::string(description_id), i, v, v == 0 ? texts[v] : normalize(texts[v]), {}, {}});
    }
    auto predictions = predict_variants(model, backend, variants);
    per_sentence.push_back(aggregate_variants(predictions));
  }
  auto d = aggregate_description(per_sentence, model.labels());
  d.description_id = std::string(description_id);
  return d;
}

}  // namespace ccv
