#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ccv/vocabulary.hpp"

namespace ccv {

// One sentence of a description, original (variant 0) or back-translated.
struct SentenceSample {
  std::string description_id;
  std::size_t sentence_index = 0;
  std::size_t variant_index = 0;
  std::string text;
  std::string color_label;
  std::string work_type_label;

  const std::string& label(AttributeKind kind) const noexcept {
    return kind == AttributeKind::Color ? color_label : work_type_label;
  }
  bool operator==(const SentenceSample&) const = default;
};

// Lowercase, drop accession-number tokens (three or more digit groups joined
// by periods, e.g. 65.3.35), collapse whitespace and trim. Idempotent.
std::string normalize(std::string_view raw);

// Splits on runs of . ! ? followed by whitespace or end of text. A period
// after a guarded abbreviation ("approx.", "st.", ...) or between digits
// does not end a sentence. Delimiters are dropped; empty sentences skipped.
std::vector<std::string> tokenize_sentences(std::string_view normalized);

// A description as one sample: normalized text minus trailing delimiters.
std::string whole_description(std::string_view normalized);

// Sentence-level re-annotation. A sentence keeps a gold label only if it
// mentions a term of the gold class; otherwise it gets the sentinel.
std::pair<std::string, std::string> annotate_sentence(const Vocabulary& vocab, std::string_view sentence,
                                                      std::string_view gold_color_group,
                                                      std::string_view gold_work_type);

std::string annotate(const TermLexicon& lexicon, std::string_view sentence, std::string_view gold);

}  // namespace ccv
