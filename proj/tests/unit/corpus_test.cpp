#include <gtest/gtest.h>

#include <filesystem>

#include "ccv/corpus.hpp"
#include "ccv/error.hpp"

using namespace ccv;

namespace {

std::vector<DescriptionRecord> make_records(std::size_t n) {
  std::vector<DescriptionRecord> out;
  const char* colors[] = {"white", "black", "navy blue", "rust"};
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back({"r" + std::to_string(i), "a dress number " + std::to_string(i) + ".", colors[i % 4], "", "dress"});
  }
  Vocabulary v;
  validate_records(out, v);
  return out;
}

}  // namespace

TEST(Corpus, ParsesTrainingExampleRecord) {
  Vocabulary v;
  auto recs = parse_corpus(
      R"({"id":"65.3.35","text":"White and cream formal dress. Fully covered in netting and lace.","color":"white","work_type":"dress"})",
      v);
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_EQ(recs[0].gold_color_group, "white");
  EXPECT_EQ(recs[0].gold_work_type, "dress");
}

TEST(Corpus, EmptyInputGivesNoRecords) {
  Vocabulary v;
  EXPECT_TRUE(parse_corpus("", v).empty());
  EXPECT_TRUE(parse_corpus("\n\n", v).empty());
}

TEST(Corpus, DuplicateIdNamed) {
  Vocabulary v;
  const std::string line = R"({"id":"x1","text":"red coat","color":"red","work_type":"coats"})";
  try {
    parse_corpus(line + "\n" + line + "\n", v);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("x1"), std::string::npos);
  }
}

TEST(Corpus, RejectsBadRecords) {
  Vocabulary v;
  EXPECT_THROW(parse_corpus(R"({"id":"a","text":"  ","color":"red","work_type":"coats"})", v), ValidationError);
  EXPECT_THROW(parse_corpus(R"({"id":"a","text":"x","color":"magenta","work_type":"coats"})", v), ValidationError);
  EXPECT_THROW(parse_corpus(R"({"id":"a","text":"x","color":"red","work_type":"toga"})", v), ValidationError);
  try {
    parse_corpus("{\"id\":\"a\",\"text\":\"x\",\"color\":\"red\",\"work_type\":\"coats\"}\n{broken", v);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  // The sentinel is an allowed gold color.
  EXPECT_NO_THROW(parse_corpus(R"({"id":"a","text":"x","color":"no-color","work_type":"no_work_type"})", v));
}

TEST(Corpus, SaveLoadIsIdentity) {
  auto recs = make_records(12);
  auto path = std::filesystem::temp_directory_path() / "ccv_corpus_roundtrip.jsonl";
  save_corpus(recs, path);
  Vocabulary v;
  EXPECT_EQ(load_corpus(path, v), recs);
  std::filesystem::remove(path);
}

TEST(Corpus, SplitSizesMatchPaper) {
  auto recs = make_records(380);
  for (std::uint64_t seed : {0u, 1u, 99u}) {
    auto s = split_corpus(recs, 0.8, seed);
    EXPECT_EQ(s.train_ids.size(), 304u);
    EXPECT_EQ(s.test_ids.size(), 76u);
  }
}

TEST(Corpus, SplitDeterministicAndPartition) {
  auto recs = make_records(10);
  EXPECT_EQ(split_corpus(recs, 0.8, 5).test_ids, split_corpus(recs, 0.8, 5).test_ids);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto s = split_corpus(recs, 0.8, seed);
    EXPECT_EQ(s.train_ids.size() + s.test_ids.size(), 10u);
    EXPECT_NO_THROW(assert_disjoint(s.train_ids, s.test_ids, "split"));
    for (const auto& r : recs) EXPECT_TRUE(s.train_ids.count(r.id) + s.test_ids.count(r.id) == 1);
  }
}

TEST(Corpus, StratifiedSplitKeepsSize) {
  auto recs = make_records(40);
  auto s = split_corpus(recs, 0.8, 3, true);
  EXPECT_EQ(s.test_ids.size(), 8u);
  std::map<std::string, int> per_group;
  for (const auto& r : select(recs, s.test_ids)) ++per_group[r.gold_color_group];
  for (const auto& [g, n] : per_group) EXPECT_EQ(n, 2) << g;
}

TEST(Corpus, SplitErrors) {
  auto recs = make_records(5);
  EXPECT_THROW(split_corpus(recs, 0.0, 1), InvalidFraction);
  EXPECT_THROW(split_corpus(recs, 1.0, 1), InvalidFraction);
  EXPECT_THROW(split_corpus(make_records(1), 0.8, 1), TooFewRecords);
  EXPECT_THROW(assert_disjoint({"a", "b"}, {"b"}, "t"), ValidationError);
}
