#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ccv/augment.hpp"
#include "ccv/embedding.hpp"
#include "ccv/mlp.hpp"
#include "ccv/preprocess.hpp"

namespace ccv {

struct VariantPrediction {
  std::string description_id;
  std::size_t sentence_index = 0;
  std::size_t variant_index = 0;
  std::string text;
  Vector probabilities;
  std::size_t label = 0;  // argmax, lowest index on ties
  double probability = 0.0;
};

struct SentencePrediction {
  std::string description_id;
  std::size_t sentence_index = 0;
  std::size_t label = 0;
  double probability = 0.0;  // mean predicted probability of the winning voters
  std::vector<VariantPrediction> variants;
};

struct DescriptionPrediction {
  std::string description_id;
  AttributeKind attribute = AttributeKind::Color;
  std::size_t label = 0;
  double probability = 0.0;
  std::optional<std::size_t> supporting_sentence;  // earliest sentence voting for `label`
  std::vector<std::size_t> ranking;                // every class, best first; ranking[0] == label
  std::vector<SentencePrediction> sentences;
};

std::vector<VariantPrediction> predict_variants(const MlpClassifier& model, EmbeddingBackend& backend,
                                                std::span<const SentenceSample> variants);

// Plurality vote; ties go to the higher mean predicted probability among the
// tied labels' voters, then to the lower class index. Throws MixedProvenance.
SentencePrediction aggregate_variants(std::span<const VariantPrediction> predictions);

// Sentinel-labeled sentences are discarded; the label with the largest summed
// sentence probability wins, ties to the label seen in the earliest sentence.
// With nothing left the sentinel wins. The ranking lists voted labels in that
// order, then the remaining labels by summed mean variant probability.
DescriptionPrediction aggregate_description(std::span<const SentencePrediction> sentences, const LabelSet& labels);

// Class indices of the k largest probabilities, best first, ties to lower index.
std::vector<std::size_t> top_k_labels(std::span<const double> probabilities, std::size_t k);

struct InferenceOptions {
  bool tokenize = true;
};

// normalize -> tokenize -> augment -> classify -> aggregate.
DescriptionPrediction predict_description(std::string_view description_id, std::string_view text,
                                          const MlpClassifier& model, EmbeddingBackend& backend,
                                          const std::vector<AugmentationChain>& chains, Translator& translator,
                                          InferenceOptions options = {});

}  // namespace ccv
