#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ccv/dataset.hpp"
#include "ccv/embedding.hpp"
#include "ccv/mlp.hpp"

namespace ccv {

// Defaults are the tuned values: batch 8, Adam lr 1e-3, betas 0.9/0.99,
// epsilon 1e-7, at most 20 epochs.
struct Hyperparams {
  std::size_t batch_size = 8;
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.99;
  double epsilon = 1e-7;
  std::size_t max_epochs = 20;
  std::size_t patience = 3;
  std::size_t hidden1 = 256;
  std::size_t hidden2 = 64;
  std::uint64_t init_seed = 42;
  std::uint64_t shuffle_seed = 43;

  AdamOptions adam() const { return {learning_rate, beta1, beta2, epsilon}; }
  // Throws ConfigError naming the offending field.
  void validate() const;
};

struct EpochStats {
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  double validation_loss = 0.0;
  double validation_accuracy = 0.0;
  bool operator==(const EpochStats&) const = default;
};

struct TrainReport {
  std::vector<EpochStats> epochs;
  std::size_t stopped_epoch = 0;  // epochs actually run
  std::size_t best_epoch = 0;     // 1-based epoch whose weights were kept
  bool operator==(const TrainReport&) const = default;
};

std::string train_report_json(const TrainReport& report);
TrainReport parse_train_report(std::string_view json);

struct TrainResult {
  MlpClassifier model;
  TrainReport report;
};

// Embedded samples with class indices; texts are embedded once each.
struct EmbeddedSet {
  std::vector<Vector> inputs;
  std::vector<std::size_t> labels;
  std::vector<Example> examples() const;
};

EmbeddedSet embed_dataset(const SentenceDataset& dataset, EmbeddingBackend& backend);

// Minibatch Adam with early stopping on validation loss: training stops once
// `patience` consecutive epochs fail to improve the best loss (patience 0
// stops at the first such epoch), and the best epoch's weights are returned.
TrainResult train(MlpClassifier model, const EmbeddedSet& train_set, const EmbeddedSet& validation_set,
                  const Hyperparams& hp);

TrainResult train(const SentenceDataset& train_set, const SentenceDataset& validation_set, const Hyperparams& hp,
                  EmbeddingBackend& backend);

double accuracy(const MlpClassifier& model, std::span<const Example> examples);

}  // namespace ccv
