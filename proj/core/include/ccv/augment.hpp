#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "ccv/preprocess.hpp"
#include "ccv/vocabulary.hpp"

namespace ccv {

class TranslationProvider {
 public:
  virtual ~TranslationProvider() = default;
  virtual std::string name() const = 0;
  virtual std::string translate(std::string_view text, std::string_view source, std::string_view target) = 0;
};

// Returns its input unchanged.
class IdentityProvider final : public TranslationProvider {
 public:
  std::string name() const override { return "identity"; }
  std::string translate(std::string_view text, std::string_view, std::string_view) override {
    return std::string(text);
  }
};

// Deterministic stand-in for a machine-translation service. The outbound hop
// tags the text with the pivot language and applies that pivot's synonym
// substitutions; the return hop strips the tag and applies at most two
// adjacent-word swaps and one filler-word drop, chosen by hashing
// (seed, pivot, text). Pure; safe to call concurrently.
class OfflineProvider final : public TranslationProvider {
 public:
  explicit OfflineProvider(std::uint64_t seed = 0) : seed_(seed) {}
  std::string name() const override { return "offline"; }
  std::string translate(std::string_view text, std::string_view source, std::string_view target) override;

 private:
  std::uint64_t seed_;
};

// Curated translations keyed by (source, target, text). Unknown requests
// raise ProviderUnavailable.
class PhraseBookProvider final : public TranslationProvider {
 public:
  std::string name() const override { return "phrasebook"; }
  void add(std::string source, std::string target, std::string text, std::string translation);
  std::string translate(std::string_view text, std::string_view source, std::string_view target) override;

 private:
  std::map<std::tuple<std::string, std::string, std::string>, std::string> entries_;
};

struct HttpProviderOptions {
  std::string url;  // e.g. http://localhost:5000/translate
  std::chrono::milliseconds timeout{10000};
  int attempts = 3;
  std::chrono::milliseconds backoff{200};  // doubled after each failed attempt
};

// POSTs {"text", "source", "target"} as JSON and reads {"text"} back.
class HttpProvider final : public TranslationProvider {
 public:
  explicit HttpProvider(HttpProviderOptions options);
  std::string name() const override { return "endpoint"; }
  std::string translate(std::string_view text, std::string_view source, std::string_view target) override;

 private:
  HttpProviderOptions options_;
  std::string scheme_host_port_;
  std::string path_;
};

// Append-only translation cache keyed by (provider, source, target, content
// hash). Backed by a line-delimited JSON file when a path is given; writes
// are serialized by an internal mutex.
class TranslationCache {
 public:
  TranslationCache() = default;
  explicit TranslationCache(std::filesystem::path path);

  std::optional<std::string> find(std::string_view provider, std::string_view source, std::string_view target,
                                   std::string_view text) const;
  void store(std::string_view provider, std::string_view source, std::string_view target, std::string_view text,
             std::string_view translation);
  std::size_t size() const;

 private:
  using Key = std::tuple<std::string, std::string, std::string, std::string>;
  static Key key(std::string_view provider, std::string_view source, std::string_view target, std::string_view text);

  std::filesystem::path path_;
  mutable std::mutex mu_;
  std::map<Key, std::string> entries_;
};

struct AugmentationChain {
  int chain_id = 1;
  std::string pivot;  // fr, de or es
  bool operator==(const AugmentationChain&) const = default;
};

// French, German and Spanish pivots, chain ids 1..3.
std::vector<AugmentationChain> default_chains();
// Parses "fr,de,es" style lists; an empty string yields no chains.
std::vector<AugmentationChain> parse_chains(std::string_view pivots);

// Translation entry point for augmentation: a provider plus an optional cache.
class Translator {
 public:
  explicit Translator(TranslationProvider& provider, TranslationCache* cache = nullptr)
      : provider_(provider), cache_(cache) {}

  std::string translate(std::string_view text, std::string_view source, std::string_view target);
  std::size_t provider_calls() const noexcept { return calls_.load(); }
  const TranslationProvider& provider() const noexcept { return provider_; }

 private:
  TranslationProvider& provider_;
  TranslationCache* cache_;
  std::atomic<std::size_t> calls_{0};
};

// en -> pivot -> en, each hop cached. Throws ProviderUnavailable or
// EmptyTranslation.
std::string back_translate(std::string_view sentence, const AugmentationChain& chain, Translator& translator);

// Original text followed by one back-translated variant per chain.
std::vector<std::string> sentence_variants(std::string_view sentence, const std::vector<AugmentationChain>& chains,
                                           Translator& translator);

// Expands an original sample into 1 + chains.size() samples, re-annotating
// each variant against the description's gold labels.
std::vector<SentenceSample> augment_sentence(const SentenceSample& sample, std::string_view gold_color_group,
                                             std::string_view gold_work_type,
                                             const std::vector<AugmentationChain>& chains, Translator& translator,
                                             const Vocabulary& vocab);

}  // namespace ccv
