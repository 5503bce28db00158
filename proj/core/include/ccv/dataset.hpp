#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ccv/augment.hpp"
#include "ccv/corpus.hpp"
#include "ccv/preprocess.hpp"
#include "ccv/vocabulary.hpp"

namespace ccv {

struct DatasetProvenance {
  std::uint64_t split_seed = 0;
  std::uint64_t balance_seed = 0;
  double fraction = 1.0;
  bool balanced = false;
};

struct SentenceDataset {
  std::vector<SentenceSample> samples;
  AttributeKind attribute = AttributeKind::Color;
  LabelSet label_set;
  DatasetProvenance provenance;

  bool empty() const noexcept { return samples.empty(); }
  std::size_t size() const noexcept { return samples.size(); }
  std::size_t label_index(const SentenceSample& s) const { return label_set.index_of(s.label(attribute)); }
  std::set<std::string> description_ids() const;
};

// Label -> count over every class in the label set (zeros included).
struct ClassDistribution {
  std::map<std::string, std::size_t> counts;
  std::size_t total() const noexcept;
};

ClassDistribution distribution(const SentenceDataset& dataset);
std::string format_distribution(const ClassDistribution& dist, const LabelSet& labels);

struct BuildOptions {
  // false feeds each whole description as a single sample labeled with the
  // description's gold label (no sentence-level re-annotation).
  bool tokenize = true;
};

// Tokenize, annotate and augment every record. Sample order follows record
// order, then sentence index, then variant index.
SentenceDataset build_sentence_dataset(const std::vector<DescriptionRecord>& records, AttributeKind attribute,
                                       const std::vector<AugmentationChain>& chains, Translator& translator,
                                       const Vocabulary& vocab, BuildOptions options = {});

// Keeps round(f * n) of the n sentinel samples, chosen uniformly; every
// other sample is kept. The result is shuffled with the same seed.
SentenceDataset undersample_sentinel(const SentenceDataset& dataset, double fraction, std::uint64_t seed);

// Description-level split; all samples of one description stay together.
// The validation side gets round((1 - ratio) * ids) descriptions, at least one.
std::pair<SentenceDataset, SentenceDataset> split_train_validation(const SentenceDataset& dataset, double ratio,
                                                                   std::uint64_t seed);

// Sample indices grouped into batches; each epoch is a seeded permutation and
// the last batch may be short.
std::vector<std::vector<std::size_t>> batches(const SentenceDataset& dataset, std::size_t batch_size,
                                              std::uint64_t epoch_seed);
std::vector<std::vector<std::size_t>> batch_indices(std::size_t count, std::size_t batch_size,
                                                    std::uint64_t epoch_seed);

// Throws ValidationError when the two datasets share a description id.
void assert_no_leakage(const SentenceDataset& train, const SentenceDataset& test);

std::string serialize_samples(const std::vector<SentenceSample>& samples);
std::vector<SentenceSample> parse_samples(std::string_view contents);

}  // namespace ccv
