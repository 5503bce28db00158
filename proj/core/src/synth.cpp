#include "ccv/synth.hpp"

#include <array>
#include <cstdio>
#include <string_view>

#include "ccv/hash.hpp"

namespace ccv {

namespace {

template <typename T, std::size_t N>
const T& pick(Rng& rng, const std::array<T, N>& items) {
  return items[rng.below(N)];
}

constexpr std::array<std::string_view, 14> kAdjectives = {
    "formal", "long",   "short", "fitted", "sleeveless", "girl's", "men's",
    "women's", "lightweight", "simple", "evening", "day", "quilted", "tailored"};

constexpr std::array<std::string_view, 12> kMaterials = {"silk",  "cotton",  "wool",   "linen", "velvet", "taffeta",
                                                         "satin", "chiffon", "organza", "crepe", "lace",   "brocade"};

// Gold work type label -> noun used in the text.
struct Garment {
  std::string_view label;
  std::string_view noun;
};
constexpr std::array<Garment, 12> kGarments = {{
    {"accessories", "accessory"},
    {"blouses", "blouse"},
    {"cape", "cape"},
    {"coats", "coat"},
    {"crinolines", "crinoline"},
    {"dress", "dress"},
    {"jacket", "jacket"},
    {"kimono", "kimono"},
    {"shirt", "shirt"},
    {"shorts", "shorts"},
    {"suit", "suit"},
    {"sweater", "sweater"},
}};

// Garment nouns the work-type lexicon does not know.
constexpr std::array<std::string_view, 6> kUnlistedGarments = {"robe", "bonnet", "gown", "vest", "apron", "petticoat"};

constexpr std::array<std::string_view, 10> kTrims = {"collar", "cuffs",  "hem",  "bodice", "sleeves",
                                                     "buttons", "ribbon", "sash", "lining", "yoke"};

// Secondary colors lean toward the usual trim colors.
constexpr std::array<std::string_view, 12> kSecondaryColors = {"white", "cream", "gold",  "black",  "beige", "silver",
                                                               "white", "cream", "ivory", "gold",   "red",   "blue"};

constexpr std::array<std::string_view, 10> kNeutral = {
    "shows light wear at the hem",
    "label reads made in paris",
    "donated by the family of the original owner",
    "closes at the back with hooks and eyes",
    "hand stitched throughout",
    "slight staining near the waist",
    "worn for a wedding in 1925",
    "fabric is fragile in places",
    "measurements are taken flat",
    "maker unknown",
};

std::string detail_sentence(Rng& rng, std::string_view garment, bool with_color) {
  const auto trim = pick(rng, kTrims);
  const auto material = pick(rng, kMaterials);
  if (!with_color) {
    switch (rng.below(3)) {
      case 0: return "the " + std::string(garment) + " has a " + std::string(trim) + " trimmed in " + std::string(material);
      case 1: return std::string(trim) + " finished with " + std::string(material) + " piping";
      default: return "has a rounded " + std::string(trim) + " and a fitted waist";
    }
  }
  const auto color = pick(rng, kSecondaryColors);
  switch (rng.below(4)) {
    case 0: return std::string(trim) + " trimmed in " + std::string(color) + " " + std::string(material);
    case 1: return "the " + std::string(garment) + " has " + std::string(color) + " " + std::string(trim);
    case 2: return "embroidery in " + std::string(color) + " along the " + std::string(trim);
    default: return "lined with " + std::string(color) + " " + std::string(material);
  }
}

}  // namespace

std::vector<DescriptionRecord> synthesize_corpus(const SynthOptions& options, const Vocabulary& vocab) {
  Rng rng(combine_seed(options.seed, 0x5ca1ab1e));
  // Primary color terms grouped by color group, from the lexicon itself.
  std::vector<std::vector<std::string>> groups;
  std::vector<std::string> group_labels;
  for (const auto& label : vocab.color.label_set().classes()) {
    if (label == vocab.color.label_set().sentinel()) continue;
    std::vector<std::string> terms;
    for (const auto& [term, group] : vocab.color.terms()) {
      if (group == label) terms.push_back(term);
    }
    if (!terms.empty()) {
      groups.push_back(std::move(terms));
      group_labels.push_back(label);
    }
  }

  std::vector<DescriptionRecord> out;
  out.reserve(options.descriptions);
  for (std::size_t i = 0; i < options.descriptions; ++i) {
    DescriptionRecord r;
    char id[32];
    std::snprintf(id, sizeof id, "syn.%llu.%04zu", static_cast<unsigned long long>(options.seed), i + 1);
    r.id = id;

    std::string garment_label(kNoWorkType);
    std::string garment;
    if (rng.unit() < options.no_work_type_rate) {
      garment = pick(rng, kUnlistedGarments);
    } else {
      const auto& g = kGarments[i % kGarments.size()];
      garment_label = g.label;
      garment = g.noun;
    }

    std::string lead = std::string(pick(rng, kAdjectives)) + " ";
    if (rng.unit() < options.no_color_rate) {
      r.gold_color_term = std::string(kNoColor);
    } else {
      const auto gi = rng.below(groups.size());
      const auto& terms = groups[gi];
      r.gold_color_term = terms[rng.below(terms.size())];
      lead += r.gold_color_term + " ";
    }
    lead += std::string(pick(rng, kMaterials)) + " " + garment;
    r.gold_work_type = garment_label;

    const bool secondary = rng.unit() < options.secondary_color_rate;
    r.text = lead + ". " + detail_sentence(rng, garment, secondary) + ". " + std::string(pick(rng, kNeutral)) + ".";
    if (rng.below(4) == 0) r.text[0] = static_cast<char>(r.text[0] - 'a' + 'A');
    out.push_back(std::move(r));
  }
  validate_records(out, vocab);
  return out;
}

}  // namespace ccv
