#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int status = -1;
  std::string out;
};

Outcome run(const std::string& args) {
  Outcome o;
  const std::string cmd = std::string(CCV_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return o;
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), pipe)) o.out += buf.data();
  const int raw = pclose(pipe);
  o.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    if (std::string(CCV_CLI_PATH).empty()) GTEST_SKIP() << "command-line tool not built";
    dir_ = fs::temp_directory_path() / ("ccv_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

}  // namespace

TEST_F(Cli, SynthThenValidate) {
  const auto corpus = (dir_ / "c.jsonl").string();
  ASSERT_EQ(run("synth --descriptions 30 --seed 3 -o " + corpus).status, 0);
  auto v = run("--corpus " + corpus + " validate");
  EXPECT_EQ(v.status, 0);
  EXPECT_NE(v.out.find("30 records"), std::string::npos) << v.out;
}

TEST_F(Cli, ExitCodes) {
  std::ofstream(dir_ / "bad.jsonl") << "{\"id\":\"a\",\"text\":\"x\",\"color\":\"magenta\",\"work_type\":\"coats\"}\n";
  EXPECT_EQ(run("--corpus " + (dir_ / "bad.jsonl").string() + " validate").status, 1);
  EXPECT_EQ(run("--set no.such.key=1 --corpus x validate").status, 1);
  EXPECT_EQ(run("--corpus " + (dir_ / "missing.jsonl").string() + " validate").status, 2);
  EXPECT_EQ(run("--out-dir " + (dir_ / "none").string() + " report").status, 1);
}

TEST_F(Cli, TrainTwiceIsByteIdenticalAndWritesManifest) {
  const auto corpus = (dir_ / "c.jsonl").string();
  ASSERT_EQ(run("synth --descriptions 40 --seed 5 -o " + corpus).status, 0);
  const std::string common = "--corpus " + corpus + " --set train.max_epochs=2 --set attributes=work_type ";
  ASSERT_EQ(run(common + "--out-dir " + (dir_ / "a").string() + " train").status, 0);
  ASSERT_EQ(run(common + "--out-dir " + (dir_ / "b").string() + " train").status, 0);
  EXPECT_EQ(slurp(dir_ / "a" / "model_work_type.bin"), slurp(dir_ / "b" / "model_work_type.bin"));
  const auto manifest = slurp(dir_ / "a" / "manifest_train.json");
  EXPECT_NE(manifest.find("config_hash"), std::string::npos);
  EXPECT_NE(manifest.find("model_work_type.bin"), std::string::npos);
  ASSERT_EQ(run(common + "--out-dir " + (dir_ / "a").string() + " evaluate").status, 0);
  EXPECT_TRUE(fs::exists(dir_ / "a" / "eval_work_type.json"));
  auto report = run(common + "--out-dir " + (dir_ / "a").string() + " report");
  EXPECT_EQ(report.status, 0);
  EXPECT_NE(report.out.find("accuracy"), std::string::npos);
  auto predict = run(common + "--out-dir " + (dir_ / "a").string() + " predict --text \"A red silk dress.\"");
  EXPECT_EQ(predict.status, 0);
  EXPECT_NE(predict.out.find("\"work_type\""), std::string::npos) << predict.out;
}

TEST_F(Cli, InputsAreNotModified) {
  const auto corpus = dir_ / "c.jsonl";
  ASSERT_EQ(run("synth --descriptions 20 -o " + corpus.string()).status, 0);
  const auto before = slurp(corpus);
  ASSERT_EQ(run("--corpus " + corpus.string() + " --out-dir " + (dir_ / "o").string() + " split").status, 0);
  ASSERT_EQ(run("--corpus " + corpus.string() + " --out-dir " + (dir_ / "o").string() + " augment").status, 0);
  EXPECT_EQ(slurp(corpus), before);
  EXPECT_TRUE(fs::exists(dir_ / "o" / "samples_train.jsonl"));
}
