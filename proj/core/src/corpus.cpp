#include "ccv/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "ccv/error.hpp"
#include "ccv/hash.hpp"
#include "ccv/preprocess.hpp"
#include "ccv/text.hpp"

namespace ccv {

void validate_records(std::vector<DescriptionRecord>& records, const Vocabulary& vocab) {
  std::set<std::string> ids;
  const auto& colors = vocab.color;
  const auto& work_types = vocab.work_type.label_set();
  for (auto& r : records) {
    if (r.id.empty()) throw ValidationError("record with empty id");
    if (!ids.insert(r.id).second) throw ValidationError("duplicate id '" + r.id + "'");
    if (normalize(r.text).empty()) throw ValidationError("record '" + r.id + "' has empty text");
    if (text::to_lower(r.gold_color_term) == colors.label_set().sentinel()) {
      r.gold_color_group = colors.label_set().sentinel();
    } else {
      try {
        r.gold_color_group = colors.map_term(r.gold_color_term);
      } catch (const UnknownTerm&) {
        throw ValidationError("record '" + r.id + "' has unknown gold color '" + r.gold_color_term + "'");
      }
    }
    if (!work_types.contains(r.gold_work_type)) {
      throw ValidationError("record '" + r.id + "' has unknown gold work type '" + r.gold_work_type + "'");
    }
  }
}

std::vector<DescriptionRecord> parse_corpus(std::string_view contents, const Vocabulary& vocab) {
  std::vector<DescriptionRecord> records;
  std::size_t lineno = 0;
  for (const auto& raw : text::split(contents, '\n')) {
    ++lineno;
    auto line = text::trim(raw);
    if (line.empty()) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(lineno, std::string("malformed record: ") + e.what());
    }
    if (!obj.is_object()) throw ParseError(lineno, "record is not an object");
    auto field = [&](const char* key) -> std::string {
      auto it = obj.find(key);
      if (it == obj.end() || !it->is_string()) throw ParseError(lineno, std::string("missing string field '") + key + "'");
      return it->get<std::string>();
    };
    DescriptionRecord r;
    r.id = field("id");
    r.text = field("text");
    r.gold_color_term = field("color");
    r.gold_work_type = field("work_type");
    records.push_back(std::move(r));
  }
  validate_records(records, vocab);
  return records;
}

std::vector<DescriptionRecord> load_corpus(const std::filesystem::path& path, const Vocabulary& vocab) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open corpus file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_corpus(ss.str(), vocab);
}

std::string serialize_corpus(const std::vector<DescriptionRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    nlohmann::ordered_json obj;
    obj["id"] = r.id;
    obj["text"] = r.text;
    obj["color"] = r.gold_color_term;
    obj["work_type"] = r.gold_work_type;
    out += obj.dump();
    out += '\n';
  }
  return out;
}

void save_corpus(const std::vector<DescriptionRecord>& records, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write corpus file " + path.string());
  out << serialize_corpus(records);
}

namespace {

std::size_t test_quota(std::size_t n, double ratio) {
  auto q = static_cast<std::size_t>(std::llround((1.0 - ratio) * static_cast<double>(n)));
  return std::clamp<std::size_t>(q, 1, n - 1);
}

}  // namespace

CorpusSplit split_corpus(const std::vector<DescriptionRecord>& records, double ratio, std::uint64_t seed,
                         bool stratified) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw InvalidFraction("split ratio must lie in (0, 1)");
  if (records.size() < 2) throw TooFewRecords("need at least 2 records to split, got " + std::to_string(records.size()));

  CorpusSplit split;
  split.seed = seed;
  split.ratio = ratio;
  Rng rng(seed);
  const std::size_t quota = test_quota(records.size(), ratio);

  if (!stratified) {
    std::vector<std::string> ids;
    ids.reserve(records.size());
    for (const auto& r : records) ids.push_back(r.id);
    rng.shuffle(ids);
    for (std::size_t i = 0; i < ids.size(); ++i) (i < quota ? split.test_ids : split.train_ids).insert(ids[i]);
    return split;
  }

  std::map<std::string, std::vector<std::string>> strata;
  for (const auto& r : records) strata[r.gold_color_group].push_back(r.id);
  const double share = static_cast<double>(quota) / static_cast<double>(records.size());
  struct Alloc {
    std::string group;
    std::size_t take;
    double remainder;
  };
  std::vector<Alloc> alloc;
  std::size_t assigned = 0;
  for (const auto& [group, ids] : strata) {
    double exact = share * static_cast<double>(ids.size());
    auto take = static_cast<std::size_t>(std::floor(exact));
    alloc.push_back({group, take, exact - static_cast<double>(take)});
    assigned += take;
  }
  std::stable_sort(alloc.begin(), alloc.end(), [](const Alloc& a, const Alloc& b) { return a.remainder > b.remainder; });
  for (std::size_t i = 0; assigned < quota && i < alloc.size(); ++i, ++assigned) ++alloc[i].take;
  for (const auto& a : alloc) {
    auto ids = strata[a.group];
    rng.shuffle(ids);
    for (std::size_t i = 0; i < ids.size(); ++i) (i < a.take ? split.test_ids : split.train_ids).insert(ids[i]);
  }
  return split;
}

std::vector<DescriptionRecord> select(const std::vector<DescriptionRecord>& records, const std::set<std::string>& ids) {
  std::vector<DescriptionRecord> out;
  for (const auto& r : records) {
    if (ids.count(r.id)) out.push_back(r);
  }
  return out;
}

void assert_disjoint(const std::set<std::string>& a, const std::set<std::string>& b, std::string_view context) {
  for (const auto& id : a) {
    if (b.count(id)) throw ValidationError("leakage in " + std::string(context) + ": id '" + id + "' on both sides");
  }
}

}  // namespace ccv
