#include <gtest/gtest.h>

#include <map>

#include "ccv/config.hpp"
#include "ccv/error.hpp"

using namespace ccv;

TEST(Config, DefaultsFollowTunedValues) {
  PipelineConfig c;
  EXPECT_EQ(c.hyper.batch_size, 8u);
  EXPECT_DOUBLE_EQ(c.hyper.learning_rate, 0.001);
  EXPECT_DOUBLE_EQ(c.hyper.beta1, 0.9);
  EXPECT_DOUBLE_EQ(c.hyper.beta2, 0.99);
  EXPECT_DOUBLE_EQ(c.hyper.epsilon, 1e-7);
  EXPECT_EQ(c.hyper.max_epochs, 20u);
  EXPECT_DOUBLE_EQ(c.balance_fraction, 0.15);
  EXPECT_DOUBLE_EQ(c.split_ratio, 0.8);
  EXPECT_EQ(c.embedding_dim, 512u);
}

TEST(Config, TextRoundTrip) {
  PipelineConfig c;
  c.corpus = "data/corpus.jsonl";
  c.set("train.learning_rate", "0.0005");
  c.set("attributes", "work_type");
  c.set("augment.chains", "de");
  c.set("tokenize", "false");
  auto back = parse_config(config_text(c));
  EXPECT_EQ(config_text(back), config_text(c));
  EXPECT_EQ(config_hash(back), config_hash(c));
  for (const auto& key : config_keys()) EXPECT_EQ(back.get(key), c.get(key)) << key;
}

TEST(Config, ParsesCommentsAndRejectsUnknownKeys) {
  auto c = parse_config("# run\nsplit.seed = 9  \n\ntrain.batch_size=16 # inline\n");
  EXPECT_EQ(c.split_seed, 9u);
  EXPECT_EQ(c.hyper.batch_size, 16u);
  try {
    parse_config("train.batchsize = 4\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("train.batchsize"), std::string::npos);
  }
  EXPECT_THROW(parse_config("split.ratio = 1.5\n").validate(), ConfigError);
  EXPECT_THROW(parse_config("train.batch_size = many\n"), ConfigError);
  EXPECT_THROW(parse_config("no equals sign\n"), ConfigError);
}

TEST(Config, EnvironmentOverridesFile) {
  auto c = parse_config("split.seed = 9\n");
  std::map<std::string, std::string> env = {{"CCV_SPLIT_SEED", "11"}, {"CCV_TRAIN_MAX_EPOCHS", "5"}};
  apply_environment(c, [&](const std::string& k) -> std::optional<std::string> {
    auto it = env.find(k);
    if (it == env.end()) return std::nullopt;
    return it->second;
  });
  EXPECT_EQ(c.split_seed, 11u);
  EXPECT_EQ(c.hyper.max_epochs, 5u);
  EXPECT_EQ(env_name("train.learning_rate"), "CCV_TRAIN_LEARNING_RATE");
}

TEST(Config, SeedOverrideTouchesEverySeed) {
  PipelineConfig a, b;
  a.override_seeds(5);
  b.override_seeds(6);
  for (const auto& key : config_keys()) {
    if (key.find("seed") != std::string::npos) {
      EXPECT_NE(a.get(key), PipelineConfig{}.get(key)) << key;
      EXPECT_NE(a.get(key), b.get(key)) << key;
    }
  }
  PipelineConfig again;
  again.override_seeds(5);
  EXPECT_EQ(config_hash(again), config_hash(a));
}
