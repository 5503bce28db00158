#include "ccv/vocabulary.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "ccv/error.hpp"
#include "ccv/text.hpp"

namespace ccv {

namespace text {

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string_view trim(std::string_view s) noexcept {
  constexpr std::string_view ws = " \t\r\n\f\v";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::vector<std::string> words(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    while (!cur.empty() && (cur.back() == '\'' || cur.back() == '-')) cur.pop_back();
    if (!cur.empty()) out.push_back(std::move(cur));
    cur.clear();
  };
  for (char c : s) {
    if (is_word_char(c) || ((c == '\'' || c == '-') && !cur.empty())) {
      cur += c;
    } else {
      flush();
    }
  }
  flush();
  return out;
}

}  // namespace text

std::vector<std::string> text_lines(std::string_view contents) {
  std::vector<std::string> out;
  for (const auto& line : text::split(contents, '\n')) {
    auto t = text::trim(line);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

std::string_view to_string(AttributeKind kind) noexcept {
  return kind == AttributeKind::Color ? "color" : "work_type";
}

AttributeKind parse_attribute(std::string_view name) {
  auto lower = text::to_lower(name);
  if (lower == "color") return AttributeKind::Color;
  if (lower == "work_type" || lower == "worktype" || lower == "work-type") return AttributeKind::WorkType;
  throw ConfigError("unknown attribute '" + std::string(name) + "' (expected color or work_type)");
}

LabelSet::LabelSet(AttributeKind attribute, std::vector<std::string> classes, std::string_view sentinel)
    : attribute_(attribute), classes_(std::move(classes)) {
  if (classes_.size() < 2) throw ValidationError("a label set needs at least two classes");
  std::set<std::string_view> seen;
  for (const auto& c : classes_) {
    if (!seen.insert(c).second) throw ValidationError("duplicate class label '" + c + "'");
  }
  auto it = std::find(classes_.begin(), classes_.end(), sentinel);
  if (it == classes_.end()) throw ValidationError("sentinel '" + std::string(sentinel) + "' missing from label set");
  sentinel_ = static_cast<std::size_t>(it - classes_.begin());
}

bool LabelSet::contains(std::string_view label) const noexcept {
  return std::find(classes_.begin(), classes_.end(), label) != classes_.end();
}

std::size_t LabelSet::index_of(std::string_view label) const {
  auto it = std::find(classes_.begin(), classes_.end(), label);
  if (it == classes_.end()) {
    throw UnknownLabel("label '" + std::string(label) + "' is not a " + std::string(to_string(attribute_)) +
                       " class");
  }
  return static_cast<std::size_t>(it - classes_.begin());
}

TermLexicon::TermLexicon(AttributeKind attribute, std::map<std::string, std::string> terms,
                         std::map<std::string, std::string> aliases, std::vector<std::string> labels,
                         std::string_view sentinel)
    : terms_(std::move(terms)), aliases_(std::move(aliases)), labels_(attribute, std::move(labels), sentinel) {
  for (const auto& [term, label] : terms_) {
    if (!labels_.contains(label)) throw ValidationError("term '" + term + "' maps to unknown class '" + label + "'");
    if (label == labels_.sentinel()) throw ValidationError("term '" + term + "' maps to the sentinel class");
    surface_.emplace_back(term, label);
  }
  for (const auto& [alias, canonical] : aliases_) {
    auto it = terms_.find(canonical);
    if (it == terms_.end()) throw ValidationError("alias '" + alias + "' refers to unknown term '" + canonical + "'");
    if (terms_.count(alias)) throw ValidationError("alias '" + alias + "' is also a term");
    surface_.emplace_back(alias, it->second);
  }
  std::stable_sort(surface_.begin(), surface_.end(),
                   [](const auto& a, const auto& b) { return a.first.size() > b.first.size(); });
}

const std::string& TermLexicon::map_term(std::string_view term) const {
  auto key = text::to_lower(text::trim(term));
  if (auto it = terms_.find(key); it != terms_.end()) return it->second;
  if (auto a = aliases_.find(key); a != aliases_.end()) return terms_.at(a->second);
  throw UnknownTerm(std::string(term));
}

bool TermLexicon::knows(std::string_view term) const {
  auto key = text::to_lower(text::trim(term));
  return terms_.count(key) || aliases_.count(key);
}

std::string TermLexicon::canonical(std::string_view term) const {
  auto key = text::to_lower(text::trim(term));
  if (auto a = aliases_.find(key); a != aliases_.end()) return a->second;
  return key;
}

std::vector<Mention> TermLexicon::find_mentions(std::string_view sentence) const {
  std::vector<Mention> out;
  std::size_t i = 0;
  while (i < sentence.size()) {
    if (!text::is_word_char(sentence[i]) || (i > 0 && text::is_word_char(sentence[i - 1]))) {
      ++i;
      continue;
    }
    bool matched = false;
    for (const auto& [form, label] : surface_) {
      if (sentence.compare(i, form.size(), form) != 0) continue;
      std::size_t end = i + form.size();
      if (end < sentence.size() && text::is_word_char(sentence[end])) continue;
      out.push_back(Mention{form, label, i, end});
      i = end;
      matched = true;
      break;
    }
    if (!matched) ++i;
  }
  return out;
}

TermLexicon default_color_lexicon() {
  // Color-group table; "gold" is listed twice under metallic in the source
  // table and is stored once.
  std::map<std::string, std::string> terms = {
      {"black", "black"},       {"blue", "blue"},         {"navy blue", "blue"},  {"teal", "blue"},
      {"brown", "brown"},       {"tan", "brown"},         {"gray", "gray"},       {"silver", "gray"},
      {"green", "green"},       {"turquoise", "green"},   {"gold", "metallic"},   {"metallic", "metallic"},
      {"yellow", "yellow"},     {"amber", "yellow"},      {"coral", "orange"},    {"orange", "orange"},
      {"brass", "orange"},      {"fuchsia", "pink"},      {"pink", "pink"},       {"lavender", "purple"},
      {"purple", "purple"},     {"burgundy", "red"},      {"maroon", "red"},      {"red", "red"},
      {"rust", "red"},          {"beige", "white"},       {"cream", "white"},     {"white", "white"},
      {"clear", "white"},
  };
  std::map<std::string, std::string> aliases = {{"grey", "gray"}};
  std::vector<std::string> labels = {"black", "blue",   "brown", "gray",  "green",  "metallic", "orange",
                                     "pink",  "purple", "red",   "white", "yellow", std::string(kNoColor)};
  return TermLexicon(AttributeKind::Color, std::move(terms), std::move(aliases), std::move(labels), kNoColor);
}

TermLexicon default_work_type_lexicon() {
  std::map<std::string, std::string> terms = {
      {"accessory", "accessories"}, {"accessories", "accessories"}, {"blouse", "blouses"},
      {"blouses", "blouses"},       {"cape", "cape"},               {"capes", "cape"},
      {"coat", "coats"},            {"coats", "coats"},             {"crinoline", "crinolines"},
      {"crinolines", "crinolines"}, {"dress", "dress"},             {"dresses", "dress"},
      {"jacket", "jacket"},         {"jackets", "jacket"},          {"kimono", "kimono"},
      {"kimonos", "kimono"},        {"shirt", "shirt"},             {"shirts", "shirt"},
      {"shorts", "shorts"},         {"suit", "suit"},               {"suits", "suit"},
      {"sweater", "sweater"},       {"sweaters", "sweater"},
  };
  std::vector<std::string> labels = {"accessories", "blouses", "cape",   "coats", "crinolines",
                                     "dress",       "jacket",  "kimono", "shirt", "shorts",
                                     "suit",        "sweater", std::string(kNoWorkType)};
  return TermLexicon(AttributeKind::WorkType, std::move(terms), {}, std::move(labels), kNoWorkType);
}

TermLexicon load_lexicon(const std::filesystem::path& path, AttributeKind attribute) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open lexicon file " + path.string());
  std::map<std::string, std::string> terms;
  std::map<std::string, std::string> aliases;
  std::string sentinel(attribute == AttributeKind::Color ? kNoColor : kNoWorkType);
  std::vector<std::string> labels;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto body = text::trim(line);
    if (body.empty()) continue;
    auto tab = body.find('\t');
    if (tab == std::string_view::npos) throw ParseError(lineno, "expected term<TAB>label");
    auto term = text::to_lower(text::trim(body.substr(0, tab)));
    auto label = text::to_lower(text::trim(body.substr(tab + 1)));
    if (term.empty() || label.empty()) throw ParseError(lineno, "empty term or label");
    if (term == "sentinel") {
      sentinel = label;
      continue;
    }
    if (label.front() == '=') {
      if (!aliases.emplace(term, label.substr(1)).second) throw ParseError(lineno, "duplicate alias '" + term + "'");
      continue;
    }
    auto [it, inserted] = terms.emplace(term, label);
    if (!inserted && it->second != label) {
      throw ParseError(lineno, "term '" + term + "' mapped to both '" + it->second + "' and '" + label + "'");
    }
    if (std::find(labels.begin(), labels.end(), label) == labels.end()) labels.push_back(label);
  }
  std::sort(labels.begin(), labels.end());
  labels.push_back(sentinel);
  return TermLexicon(attribute, std::move(terms), std::move(aliases), std::move(labels), sentinel);
}

void save_lexicon(const TermLexicon& lexicon, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write lexicon file " + path.string());
  out << "sentinel\t" << lexicon.label_set().sentinel() << '\n';
  for (const auto& [term, label] : lexicon.terms()) out << term << '\t' << label << '\n';
  for (const auto& [alias, canonical] : lexicon.aliases()) out << alias << "\t=" << canonical << '\n';
}

const std::string& map_color_term(const TermLexicon& colors, std::string_view term) {
  return colors.map_term(term);
}

std::vector<Mention> find_mentions(const Vocabulary& vocab, std::string_view sentence, AttributeKind attribute) {
  return vocab.lexicon(attribute).find_mentions(sentence);
}

}  // namespace ccv
