#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ccv/augment.hpp"
#include "ccv/config.hpp"
#include "ccv/corpus.hpp"
#include "ccv/dataset.hpp"
#include "ccv/embedding.hpp"
#include "ccv/evaluation.hpp"
#include "ccv/inference.hpp"
#include "ccv/train.hpp"

namespace ccv {

std::unique_ptr<TranslationProvider> make_provider(const PipelineConfig& config);
std::unique_ptr<EmbeddingBackend> make_backend(const PipelineConfig& config);

struct TrainingData {
  SentenceDataset full;        // tokenized, annotated, augmented
  SentenceDataset balanced;    // after sentinel undersampling
  SentenceDataset train;
  SentenceDataset validation;
};

struct AttributeEvaluation {
  std::vector<DescriptionPrediction> predictions;
  EvaluationReport report;
};

struct AttributeRun {
  AttributeKind attribute;
  TrainingData data;
  TrainResult trained;
  AttributeEvaluation evaluation;
};

struct RunResult {
  CorpusSplit split;
  std::vector<AttributeRun> runs;
  const AttributeRun& run(AttributeKind kind) const;
};

// Owns the provider, cache, translator and embedding backend of one run.
class Pipeline {
 public:
  explicit Pipeline(PipelineConfig config, Vocabulary vocab = {});

  const PipelineConfig& config() const noexcept { return config_; }
  const Vocabulary& vocabulary() const noexcept { return vocab_; }
  Translator& translator() noexcept { return *translator_; }
  EmbeddingBackend& backend() noexcept { return *backend_; }
  const std::vector<AugmentationChain>& chains() const noexcept { return chains_; }

  std::vector<DescriptionRecord> load_corpus() const;
  CorpusSplit split(const std::vector<DescriptionRecord>& records) const;

  // Build, balance and split the training side of one attribute.
  TrainingData training_data(const std::vector<DescriptionRecord>& train_records, AttributeKind attribute);
  // Test-side sentences: tokenized and augmented, never balanced.
  SentenceDataset test_data(const std::vector<DescriptionRecord>& test_records, AttributeKind attribute);

  TrainResult train(const TrainingData& data);
  AttributeEvaluation evaluate(const MlpClassifier& model, const std::vector<DescriptionRecord>& test_records);
  DescriptionPrediction predict(const MlpClassifier& model, const DescriptionRecord& record);

  // split -> build -> train -> evaluate for every configured attribute, with
  // the leakage guard asserted after augmentation.
  RunResult run(const std::vector<DescriptionRecord>& records);

 private:
  PipelineConfig config_;
  Vocabulary vocab_;
  std::vector<AugmentationChain> chains_;
  std::unique_ptr<TranslationProvider> provider_;
  std::unique_ptr<TranslationCache> cache_;
  std::unique_ptr<Translator> translator_;
  std::unique_ptr<EmbeddingBackend> backend_;
};

// Line-delimited prediction records: id, then per attribute label and
// probability, plus the full variant/sentence trace when requested.
std::string predictions_jsonl(const std::vector<std::string>& ids,
                              const std::map<AttributeKind, std::vector<DescriptionPrediction>>& predictions,
                              bool trace);

std::string split_json(const CorpusSplit& split);

// Writes every artifact of a run under config.out_dir, then manifest.json
// with the config hash, seeds, input hashes and artifact checksums.
void write_run_artifacts(const Pipeline& pipeline, const RunResult& result,
                         const std::vector<DescriptionRecord>& records, bool trace);

// Reproduction record: config hash and text, every seed, checksums of the
// input files and of each artifact (paths relative to `dir`).
void write_manifest(const std::filesystem::path& file, const PipelineConfig& config,
                    const std::vector<std::filesystem::path>& inputs, const std::filesystem::path& dir,
                    const std::vector<std::string>& artifacts);

std::uint64_t file_checksum(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace ccv
