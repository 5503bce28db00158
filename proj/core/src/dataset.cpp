#include "ccv/dataset.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "ccv/error.hpp"
#include "ccv/hash.hpp"
#include "ccv/text.hpp"

namespace ccv {

std::set<std::string> SentenceDataset::description_ids() const {
  std::set<std::string> ids;
  for (const auto& s : samples) ids.insert(s.description_id);
  return ids;
}

std::size_t ClassDistribution::total() const noexcept {
  std::size_t n = 0;
  for (const auto& [label, c] : counts) n += c;
  return n;
}

ClassDistribution distribution(const SentenceDataset& dataset) {
  ClassDistribution d;
  for (const auto& label : dataset.label_set.classes()) d.counts[label] = 0;
  for (const auto& s : dataset.samples) ++d.counts.at(s.label(dataset.attribute));
  return d;
}

std::string format_distribution(const ClassDistribution& dist, const LabelSet& labels) {
  std::size_t width = 5;
  for (const auto& l : labels.classes()) width = std::max(width, l.size());
  std::ostringstream out;
  out << std::left << std::setw(static_cast<int>(width)) << "class" << "  " << std::right << std::setw(8) << "count"
      << '\n';
  for (const auto& l : labels.classes()) {
    auto it = dist.counts.find(l);
    out << std::left << std::setw(static_cast<int>(width)) << l << "  " << std::right << std::setw(8)
        << (it == dist.counts.end() ? 0 : it->second) << '\n';
  }
  out << std::left << std::setw(static_cast<int>(width)) << "total" << "  " << std::right << std::setw(8)
      << dist.total() << '\n';
  return out.str();
}

SentenceDataset build_sentence_dataset(const std::vector<DescriptionRecord>& records, AttributeKind attribute,
                                       const std::vector<AugmentationChain>& chains, Translator& translator,
                                       const Vocabulary& vocab, BuildOptions options) {
  SentenceDataset ds;
  ds.attribute = attribute;
  ds.label_set = vocab.lexicon(attribute).label_set();
  for (const auto& r : records) {
    const auto normalized = normalize(r.text);
    if (!options.tokenize) {
      auto variants = sentence_variants(whole_description(normalized), chains, translator);
      for (std::size_t v = 0; v < variants.size(); ++v) {
        SentenceSample s{r.id, 0, v, v == 0 ? variants[v] : normalize(variants[v]), r.gold_color_group,
                         r.gold_work_type};
        ds.samples.push_back(std::move(s));
      }
      continue;
    }
    const auto sentences = tokenize_sentences(normalized);
    for (std::size_t i = 0; i < sentences.size(); ++i) {
      SentenceSample original{r.id, i, 0, sentences[i], {}, {}};
      std::tie(original.color_label, original.work_type_label) =
          annotate_sentence(vocab, original.text, r.gold_color_group, r.gold_work_type);
      for (auto& s : augment_sentence(original, r.gold_color_group, r.gold_work_type, chains, translator, vocab)) {
        ds.samples.push_back(std::move(s));
      }
    }
  }
  return ds;
}

SentenceDataset undersample_sentinel(const SentenceDataset& dataset, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw InvalidFraction("undersampling fraction must lie in (0, 1], got " + std::to_string(fraction));
  }
  const auto& sentinel = dataset.label_set.sentinel();
  std::vector<std::size_t> sentinel_idx;
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < dataset.samples.size(); ++i) {
    (dataset.samples[i].label(dataset.attribute) == sentinel ? sentinel_idx : keep).push_back(i);
  }
  Rng rng(seed);
  rng.shuffle(sentinel_idx);
  const auto quota = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(sentinel_idx.size())));
  keep.insert(keep.end(), sentinel_idx.begin(), sentinel_idx.begin() + static_cast<std::ptrdiff_t>(quota));
  std::sort(keep.begin(), keep.end());
  rng.shuffle(keep);

  SentenceDataset out;
  out.attribute = dataset.attribute;
  out.label_set = dataset.label_set;
  out.provenance = dataset.provenance;
  out.provenance.balance_seed = seed;
  out.provenance.fraction = fraction;
  out.provenance.balanced = true;
  out.samples.reserve(keep.size());
  for (auto i : keep) out.samples.push_back(dataset.samples[i]);
  return out;
}

std::pair<SentenceDataset, SentenceDataset> split_train_validation(const SentenceDataset& dataset, double ratio,
                                                                   std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw InvalidFraction("validation split ratio must lie in (0, 1)");
  std::vector<std::string> ids;
  std::set<std::string> seen;
  for (const auto& s : dataset.samples) {
    if (seen.insert(s.description_id).second) ids.push_back(s.description_id);
  }
  if (ids.size() < 2) {
    throw TooFewDescriptions("need at least 2 descriptions for a validation split, got " + std::to_string(ids.size()));
  }
  Rng rng(seed);
  rng.shuffle(ids);
  auto quota = static_cast<std::size_t>(std::llround((1.0 - ratio) * static_cast<double>(ids.size())));
  quota = std::clamp<std::size_t>(quota, 1, ids.size() - 1);
  const std::set<std::string> validation_ids(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(quota));

  std::pair<SentenceDataset, SentenceDataset> out;
  for (auto* part : {&out.first, &out.second}) {
    part->attribute = dataset.attribute;
    part->label_set = dataset.label_set;
    part->provenance = dataset.provenance;
  }
  for (const auto& s : dataset.samples) {
    (validation_ids.count(s.description_id) ? out.second : out.first).samples.push_back(s);
  }
  return out;
}

std::vector<std::vector<std::size_t>> batches(const SentenceDataset& dataset, std::size_t batch_size,
                                              std::uint64_t epoch_seed) {
  return batch_indices(dataset.samples.size(), batch_size, epoch_seed);
}

std::vector<std::vector<std::size_t>> batch_indices(std::size_t count, std::size_t batch_size,
                                                    std::uint64_t epoch_seed) {
  if (batch_size == 0) throw Error("batch size must be at least 1");
  std::vector<std::size_t> order(count);
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(epoch_seed);
  rng.shuffle(order);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < order.size(); i += batch_size) {
    auto end = std::min(order.size(), i + batch_size);
    out.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(i), order.begin() + static_cast<std::ptrdiff_t>(end));
  }
  return out;
}

void assert_no_leakage(const SentenceDataset& train, const SentenceDataset& test) {
  assert_disjoint(train.description_ids(), test.description_ids(), "sentence datasets");
}

std::string serialize_samples(const std::vector<SentenceSample>& samples) {
  std::string out;
  for (const auto& s : samples) {
    nlohmann::ordered_json obj;
    obj["description_id"] = s.description_id;
    obj["sentence_index"] = s.sentence_index;
    obj["variant_index"] = s.variant_index;
    obj["text"] = s.text;
    obj["color"] = s.color_label;
    obj["work_type"] = s.work_type_label;
    out += obj.dump();
    out += '\n';
  }
  return out;
}

std::vector<SentenceSample> parse_samples(std::string_view contents) {
  std::vector<SentenceSample> out;
  std::size_t lineno = 0;
  for (const auto& raw : text::split(contents, '\n')) {
    ++lineno;
    if (text::trim(raw).empty()) continue;
    try {
      auto obj = nlohmann::json::parse(raw);
      out.push_back({obj.at("description_id").get<std::string>(), obj.at("sentence_index").get<std::size_t>(),
                     obj.at("variant_index").get<std::size_t>(), obj.at("text").get<std::string>(),
                     obj.at("color").get<std::string>(), obj.at("work_type").get<std::string>()});
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(lineno, std::string("malformed sample: ") + e.what());
    }
  }
  return out;
}

}  // namespace ccv
