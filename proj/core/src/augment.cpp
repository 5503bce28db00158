#include "ccv/augment.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "ccv/error.hpp"
#include "ccv/hash.hpp"
#include "ccv/text.hpp"

namespace ccv {

namespace {

using SynonymTable = std::vector<std::pair<std::string_view, std::string_view>>;

// Word substitutions typical of a round trip through each pivot language.
// Color substitutions stay inside one color group.
const SynonymTable& synonyms_for(std::string_view pivot) {
  static const SynonymTable fr = {
      {"trimmed", "decorated"}, {"sleeves", "arms"},     {"buttons", "studs"},   {"collar", "neckline"},
      {"fabric", "material"},   {"floral", "flowered"},  {"cream", "beige"},     {"gray", "grey"},
      {"small", "little"},      {"decorated", "adorned"}, {"front", "face"},     {"design", "drawing"},
  };
  static const SynonymTable de = {
      {"trimmed", "edged"},      {"sleeves", "sleeve"},  {"buttons", "knobs"},   {"lined", "doubled"},
      {"long", "lengthy"},       {"embroidery", "stitching"}, {"tan", "brown"},  {"maroon", "burgundy"},
      {"ribbon", "band"},        {"pattern", "motif"},   {"closes", "shuts"},    {"has", "possesses"},
  };
  static const SynonymTable es = {
      {"trimmed", "adorned"},    {"design", "pattern"},  {"neck", "neckline"},   {"small", "little"},
      {"beige", "cream"},        {"bodice", "top"},      {"pleated", "folded"},  {"buttons", "buttonholes"},
      {"burgundy", "maroon"},    {"grey", "gray"},       {"back", "rear"},       {"wide", "broad"},
  };
  static const SynonymTable none;
  if (pivot == "fr") return fr;
  if (pivot == "de") return de;
  if (pivot == "es") return es;
  return none;
}

constexpr std::array<std::string_view, 8> kDroppable = {"formal", "very", "long", "small", "fine",
                                                        "simple", "plain", "little"};

// Splits a token into its word core and trailing punctuation.
std::pair<std::string, std::string> split_punct(const std::string& token) {
  std::size_t end = token.size();
  while (end > 0 && !text::is_word_char(token[end - 1])) --end;
  return {token.substr(0, end), token.substr(end)};
}

std::string pivot_tag(std::string_view pivot) { return "[" + std::string(pivot) + "] "; }

}  // namespace

std::string OfflineProvider::translate(std::string_view input, std::string_view source, std::string_view target) {
  if (source == target) return std::string(input);
  std::string_view body = input;
  const bool outbound = source == "en";
  const std::string_view pivot = outbound ? target : source;
  if (!outbound) {
    auto tag = pivot_tag(pivot);
    if (body.substr(0, tag.size()) == tag) body.remove_prefix(tag.size());
  }
  Rng rng(combine_seed(seed_, fnv1a(std::string(pivot) + '\x1f' + (outbound ? "out" : "back") + '\x1f' +
                                    std::string(body))));
  auto tokens = text::split(body, ' ');
  std::erase_if(tokens, [](const std::string& t) { return t.empty(); });

  if (outbound) {
    for (auto& tok : tokens) {
      auto [core, punct] = split_punct(tok);
      for (const auto& [from, to] : synonyms_for(pivot)) {
        if (core == from && rng.below(2) == 0) {
          tok = std::string(to) + punct;
          break;
        }
      }
    }
    return pivot_tag(pivot) + text::join(tokens, " ");
  }

  if (tokens.size() >= 3) {
    const std::size_t swaps = rng.below(3);
    for (std::size_t s = 0; s < swaps; ++s) {
      std::size_t i = rng.below(tokens.size() - 1);
      auto [a, pa] = split_punct(tokens[i]);
      auto [b, pb] = split_punct(tokens[i + 1]);
      // Punctuation stays in place; only the words move.
      tokens[i] = b + pa;
      tokens[i + 1] = a + pb;
    }
    if (rng.below(3) == 0) {
      for (std::size_t i = 0; i < tokens.size(); ++i) {
        auto [core, punct] = split_punct(tokens[i]);
        if (punct.empty() && std::find(kDroppable.begin(), kDroppable.end(), core) != kDroppable.end()) {
          tokens.erase(tokens.begin() + static_cast<std::ptrdiff_t>(i));
          break;
        }
      }
    }
  }
  return text::join(tokens, " ");
}

void PhraseBookProvider::add(std::string source, std::string target, std::string text, std::string translation) {
  entries_[{std::move(source), std::move(target), std::move(text)}] = std::move(translation);
}

std::string PhraseBookProvider::translate(std::string_view text, std::string_view source, std::string_view target) {
  auto it = entries_.find({std::string(source), std::string(target), std::string(text)});
  if (it == entries_.end()) {
    throw ProviderUnavailable("phrase book has no " + std::string(source) + "->" + std::string(target) +
                              " entry for '" + std::string(text) + "'");
  }
  return it->second;
}

HttpProvider::HttpProvider(HttpProviderOptions options) : options_(std::move(options)) {
  auto scheme = options_.url.find("://");
  if (scheme == std::string::npos) throw ConfigError("translation endpoint must be an absolute URL: " + options_.url);
  auto slash = options_.url.find('/', scheme + 3);
  scheme_host_port_ = options_.url.substr(0, slash);
  path_ = slash == std::string::npos ? "/" : options_.url.substr(slash);
}

std::string HttpProvider::translate(std::string_view text, std::string_view source, std::string_view target) {
  nlohmann::json body = {{"text", text}, {"source", source}, {"target", target}};
  const auto payload = body.dump();
  auto backoff = options_.backoff;
  std::string last_error = "no attempt made";
  for (int attempt = 1; attempt <= options_.attempts; ++attempt) {
    httplib::Client client(scheme_host_port_);
    auto secs = std::chrono::duration_cast<std::chrono::seconds>(options_.timeout);
    auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(options_.timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    auto res = client.Post(path_, payload, "application/json");
    if (res && res->status == 200) {
      try {
        auto reply = nlohmann::json::parse(res->body);
        return reply.at("text").get<std::string>();
      } catch (const nlohmann::json::exception& e) {
        last_error = std::string("bad response body: ") + e.what();
      }
    } else if (res) {
      last_error = "HTTP status " + std::to_string(res->status);
    } else {
      last_error = httplib::to_string(res.error());
    }
    if (attempt < options_.attempts) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
  }
  throw ProviderUnavailable("translation endpoint " + options_.url + " failed after " +
                            std::to_string(options_.attempts) + " attempts: " + last_error);
}

TranslationCache::TranslationCache(std::filesystem::path path) : path_(std::move(path)) {
  std::ifstream in(path_);
  if (!in) return;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    try {
      auto obj = nlohmann::json::parse(line);
      entries_[{obj.at("provider").get<std::string>(), obj.at("source").get<std::string>(),
                obj.at("target").get<std::string>(), obj.at("hash").get<std::string>()}] =
          obj.at("text").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(lineno, "translation cache " + path_.string() + ": " + e.what());
    }
  }
}

TranslationCache::Key TranslationCache::key(std::string_view provider, std::string_view source,
                                            std::string_view target, std::string_view text) {
  return {std::string(provider), std::string(source), std::string(target), hex64(fnv1a(text))};
}

std::optional<std::string> TranslationCache::find(std::string_view provider, std::string_view source,
                                                  std::string_view target, std::string_view text) const {
  std::lock_guard lock(mu_);
  auto it = entries_.find(key(provider, source, target, text));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void TranslationCache::store(std::string_view provider, std::string_view source, std::string_view target,
                             std::string_view text, std::string_view translation) {
  std::lock_guard lock(mu_);
  auto k = key(provider, source, target, text);
  if (!entries_.emplace(k, std::string(translation)).second) return;
  if (path_.empty()) return;
  std::ofstream out(path_, std::ios::binary | std::ios::app);
  if (!out) throw Error("cannot append to translation cache " + path_.string());
  nlohmann::ordered_json obj;
  obj["provider"] = std::get<0>(k);
  obj["source"] = std::get<1>(k);
  obj["target"] = std::get<2>(k);
  obj["hash"] = std::get<3>(k);
  obj["text"] = translation;
  out << obj.dump() << '\n';
}

std::size_t TranslationCache::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

std::vector<AugmentationChain> default_chains() { return {{1, "fr"}, {2, "de"}, {3, "es"}}; }

std::vector<AugmentationChain> parse_chains(std::string_view pivots) {
  std::vector<AugmentationChain> chains;
  if (text::trim(pivots).empty()) return chains;
  int id = 1;
  for (const auto& p : text::split(pivots, ',')) {
    auto pivot = text::to_lower(text::trim(p));
    if (pivot.empty()) throw ConfigError("empty pivot language in chain list '" + std::string(pivots) + "'");
    for (const auto& c : chains) {
      if (c.pivot == pivot) throw ConfigError("pivot '" + pivot + "' listed twice");
    }
    chains.push_back({id++, pivot});
  }
  return chains;
}

std::string Translator::translate(std::string_view text, std::string_view source, std::string_view target) {
  const auto name = provider_.name();
  if (cache_) {
    if (auto hit = cache_->find(name, source, target, text)) return *hit;
  }
  ++calls_;
  auto out = provider_.translate(text, source, target);
  if (text::trim(out).empty()) {
    throw EmptyTranslation(name + " returned an empty " + std::string(source) + "->" + std::string(target) +
                           " translation for '" + std::string(text) + "'");
  }
  if (cache_) cache_->store(name, source, target, text, out);
  return out;
}

std::string back_translate(std::string_view sentence, const AugmentationChain& chain, Translator& translator) {
  if (text::trim(sentence).empty()) throw EmptyTranslation("cannot back-translate an empty sentence");
  auto pivoted = translator.translate(sentence, "en", chain.pivot);
  return translator.translate(pivoted, chain.pivot, "en");
}

std::vector<std::string> sentence_variants(std::string_view sentence, const std::vector<AugmentationChain>& chains,
                                           Translator& translator) {
  std::vector<std::string> out;
  out.reserve(chains.size() + 1);
  out.emplace_back(sentence);
  for (const auto& chain : chains) {
    auto tag = [&](const Error& e) {
      return "chain " + std::to_string(chain.chain_id) + " (" + chain.pivot + "): " + e.what();
    };
    try {
      out.push_back(back_translate(sentence, chain, translator));
    } catch (const ProviderUnavailable& e) {
      throw ProviderUnavailable(tag(e));
    } catch (const EmptyTranslation& e) {
      throw EmptyTranslation(tag(e));
    }
  }
  return out;
}

std::vector<SentenceSample> augment_sentence(const SentenceSample& sample, std::string_view gold_color_group,
                                             std::string_view gold_work_type,
                                             const std::vector<AugmentationChain>& chains, Translator& translator,
                                             const Vocabulary& vocab) {
  if (sample.variant_index != 0) throw Error("augment_sentence expects an original (variant 0) sample");
  std::vector<SentenceSample> out;
  auto variants = sentence_variants(sample.text, chains, translator);
  for (std::size_t v = 0; v < variants.size(); ++v) {
    SentenceSample s = sample;
    s.variant_index = v;
    s.text = v == 0 ? std::move(variants[v]) : normalize(variants[v]);
    if (v > 0) std::tie(s.color_label, s.work_type_label) = annotate_sentence(vocab, s.text, gold_color_group, gold_work_type);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace ccv
