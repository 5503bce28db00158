#include "ccv/preprocess.hpp"

#include <array>
#include <cctype>

#include "ccv/text.hpp"

namespace ccv {

namespace {

constexpr bool is_space(char c) noexcept {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}
constexpr bool is_digit(char c) noexcept { return c >= '0' && c <= '9'; }
constexpr bool is_delim(char c) noexcept { return c == '.' || c == '!' || c == '?'; }

// Length of an accession token starting at i, or 0.
std::size_t accession_length(std::string_view s, std::size_t i) {
  if (!is_digit(s[i])) return 0;
  if (i > 0 && (text::is_word_char(s[i - 1]) || s[i - 1] == '.')) return 0;
  std::size_t j = i;
  int groups = 0;
  while (true) {
    std::size_t start = j;
    while (j < s.size() && is_digit(s[j])) ++j;
    if (j == start) break;
    ++groups;
    if (j + 1 < s.size() && s[j] == '.' && is_digit(s[j + 1])) {
      ++j;
      continue;
    }
    break;
  }
  if (groups < 3) return 0;
  if (j < s.size() && text::is_word_char(s[j])) return 0;
  return j - i;
}

constexpr std::array<std::string_view, 14> kAbbreviations = {
    "approx", "ca", "st", "mr", "mrs", "ms", "dr", "vs", "e.g", "i.e", "incl", "esp", "cf", "fig"};

bool guarded_abbreviation(std::string_view s, std::size_t dot) {
  std::size_t b = dot;
  while (b > 0 && !is_space(s[b - 1])) --b;
  auto word = s.substr(b, dot - b);
  while (!word.empty() && !text::is_word_char(word.front())) word.remove_prefix(1);
  for (auto abbr : kAbbreviations) {
    if (word == abbr) return true;
  }
  return false;
}

}  // namespace

std::string normalize(std::string_view raw) {
  const std::string lower = text::to_lower(raw);
  std::string stripped;
  stripped.reserve(lower.size());
  for (std::size_t i = 0; i < lower.size();) {
    if (auto n = accession_length(lower, i)) {
      i += n;
      continue;
    }
    stripped += lower[i++];
  }
  std::string out;
  out.reserve(stripped.size());
  bool pending_space = false;
  for (char c : stripped) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += c;
  }
  return out;
}

std::vector<std::string> tokenize_sentences(std::string_view s) {
  std::vector<std::string> sentences;
  std::size_t start = 0;
  auto emit = [&](std::size_t end) {
    auto piece = text::trim(s.substr(start, end - start));
    if (!piece.empty()) sentences.emplace_back(piece);
  };
  std::size_t i = 0;
  while (i < s.size()) {
    if (!is_delim(s[i])) {
      ++i;
      continue;
    }
    std::size_t run_end = i;
    while (run_end < s.size() && is_delim(s[run_end])) ++run_end;
    bool boundary = run_end == s.size() || is_space(s[run_end]);
    if (boundary && s[i] == '.' && run_end == i + 1 && guarded_abbreviation(s, i)) boundary = false;
    if (boundary) {
      emit(i);
      start = run_end;
    }
    i = run_end;
  }
  emit(s.size());
  return sentences;
}

std::string whole_description(std::string_view normalized) {
  auto t = text::trim(normalized);
  while (!t.empty() && (is_delim(t.back()) || is_space(t.back()))) t.remove_suffix(1);
  return std::string(t);
}

std::string annotate(const TermLexicon& lexicon, std::string_view sentence, std::string_view gold) {
  const auto& sentinel = lexicon.label_set().sentinel();
  if (gold == sentinel) return sentinel;
  for (const auto& m : lexicon.find_mentions(sentence)) {
    if (m.label == gold) return std::string(gold);
  }
  return sentinel;
}

std::pair<std::string, std::string> annotate_sentence(const Vocabulary& vocab, std::string_view sentence,
                                                      std::string_view gold_color_group,
                                                      std::string_view gold_work_type) {
  return {annotate(vocab.color, sentence, gold_color_group), annotate(vocab.work_type, sentence, gold_work_type)};
}

}  // namespace ccv
