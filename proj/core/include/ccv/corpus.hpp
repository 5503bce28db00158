#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "ccv/vocabulary.hpp"

namespace ccv {

// One garment: free-form text plus its gold Color term and Work Type.
struct DescriptionRecord {
  std::string id;
  std::string text;
  std::string gold_color_term;   // raw color term or "no-color"
  std::string gold_color_group;  // derived from gold_color_term
  std::string gold_work_type;    // work-type label or "no_work_type"

  const std::string& gold(AttributeKind kind) const noexcept {
    return kind == AttributeKind::Color ? gold_color_group : gold_work_type;
  }
  bool operator==(const DescriptionRecord&) const = default;
};

struct CorpusSplit {
  std::set<std::string> train_ids;
  std::set<std::string> test_ids;
  std::uint64_t seed = 0;
  double ratio = 0.8;  // train fraction
};

// Fills gold_color_group and checks every record invariant. Throws ValidationError.
void validate_records(std::vector<DescriptionRecord>& records, const Vocabulary& vocab);

// Line-delimited JSON objects with keys id, text, color, work_type.
// Throws ParseError (with line number) or ValidationError.
std::vector<DescriptionRecord> load_corpus(const std::filesystem::path& path, const Vocabulary& vocab);
std::vector<DescriptionRecord> parse_corpus(std::string_view contents, const Vocabulary& vocab);
void save_corpus(const std::vector<DescriptionRecord>& records, const std::filesystem::path& path);
std::string serialize_corpus(const std::vector<DescriptionRecord>& records);

// Description-level shuffle split. `ratio` is the train fraction; the test
// side gets round((1 - ratio) * N) records, clamped so both sides are
// nonempty. With `stratified`, quotas are allotted per gold color group by
// largest remainder so the overall test size is unchanged.
CorpusSplit split_corpus(const std::vector<DescriptionRecord>& records, double ratio, std::uint64_t seed,
                         bool stratified = false);

std::vector<DescriptionRecord> select(const std::vector<DescriptionRecord>& records,
                                      const std::set<std::string>& ids);

// Throws ValidationError if the two id sets intersect.
void assert_disjoint(const std::set<std::string>& a, const std::set<std::string>& b, std::string_view context);

}  // namespace ccv
