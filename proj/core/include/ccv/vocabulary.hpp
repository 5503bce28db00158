#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace ccv {

enum class AttributeKind { Color, WorkType };

std::string_view to_string(AttributeKind kind) noexcept;
// Accepts "color" and "work_type" (case-insensitive); throws ConfigError.
AttributeKind parse_attribute(std::string_view name);

inline constexpr std::string_view kNoColor = "no-color";
inline constexpr std::string_view kNoWorkType = "no_work_type";

// Ordered class labels for one attribute with exactly one sentinel ("no-X").
class LabelSet {
 public:
  // Empty, unusable until assigned; constructed sets always hold >= 2 classes.
  LabelSet() = default;
  LabelSet(AttributeKind attribute, std::vector<std::string> classes, std::string_view sentinel);

  AttributeKind attribute() const noexcept { return attribute_; }
  const std::vector<std::string>& classes() const noexcept { return classes_; }
  std::size_t size() const noexcept { return classes_.size(); }
  std::size_t sentinel_index() const noexcept { return sentinel_; }
  const std::string& sentinel() const noexcept { return classes_[sentinel_]; }
  const std::string& label(std::size_t index) const { return classes_.at(index); }

  bool contains(std::string_view label) const noexcept;
  // Throws UnknownLabel.
  std::size_t index_of(std::string_view label) const;

  bool operator==(const LabelSet&) const = default;

 private:
  AttributeKind attribute_ = AttributeKind::Color;
  std::vector<std::string> classes_;
  std::size_t sentinel_ = 0;
};

struct Mention {
  std::string term;   // surface form as it occurs in the sentence
  std::string label;  // class the term maps to
  std::size_t begin = 0;
  std::size_t end = 0;  // one past the last byte

  bool operator==(const Mention&) const = default;
};

// Surface-term -> class mapping with word-boundary, longest-match-first
// scanning. Immutable after construction.
class TermLexicon {
 public:
  TermLexicon() = default;

  // `aliases` maps alternate spellings onto a canonical term already present
  // in `terms`.
  TermLexicon(AttributeKind attribute, std::map<std::string, std::string> terms,
              std::map<std::string, std::string> aliases, std::vector<std::string> labels,
              std::string_view sentinel);

  AttributeKind attribute() const noexcept { return labels_.attribute(); }
  const LabelSet& label_set() const noexcept { return labels_; }

  // Case-insensitive lookup of a term or registered alias. Throws UnknownTerm.
  const std::string& map_term(std::string_view term) const;
  bool knows(std::string_view term) const;
  // Resolves a registered alias to its canonical term; other input is returned lowercased.
  std::string canonical(std::string_view term) const;

  const std::map<std::string, std::string>& terms() const noexcept { return terms_; }
  const std::map<std::string, std::string>& aliases() const noexcept { return aliases_; }

  std::vector<Mention> find_mentions(std::string_view sentence) const;

 private:
  std::map<std::string, std::string> terms_;
  std::map<std::string, std::string> aliases_;
  // All matchable surface forms (terms + aliases), longest first.
  std::vector<std::pair<std::string, std::string>> surface_;
  LabelSet labels_;
};

// The 29 distinct color terms grouped into 12 color groups, plus "grey".
TermLexicon default_color_lexicon();
// Work-type labels with naive singular/plural surface forms.
TermLexicon default_work_type_lexicon();

// Tab-separated lexicon file. Rows are "term<TAB>label"; a label written as
// "=canonical" registers the row's term as a spelling alias. An optional
// "sentinel<TAB>label" row overrides the default sentinel. '#' starts a comment.
TermLexicon load_lexicon(const std::filesystem::path& path, AttributeKind attribute);
void save_lexicon(const TermLexicon& lexicon, const std::filesystem::path& path);

// Both attribute lexicons; the unit most of the pipeline passes around.
struct Vocabulary {
  TermLexicon color = default_color_lexicon();
  TermLexicon work_type = default_work_type_lexicon();

  const TermLexicon& lexicon(AttributeKind kind) const noexcept {
    return kind == AttributeKind::Color ? color : work_type;
  }
};

// Free-function spellings of the lexicon operations.
const std::string& map_color_term(const TermLexicon& colors, std::string_view term);
std::vector<Mention> find_mentions(const Vocabulary& vocab, std::string_view sentence,
                                   AttributeKind attribute);

}  // namespace ccv
