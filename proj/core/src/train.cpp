#include "ccv/train.hpp"

#include <cmath>
#include <limits>
#include <map>

#include <json.hpp>

#include "ccv/error.hpp"
#include "ccv/hash.hpp"

namespace ccv {

void Hyperparams::validate() const {
  if (batch_size == 0) throw ConfigError("train.batch_size must be positive");
  if (!(learning_rate > 0.0)) throw ConfigError("train.learning_rate must be positive");
  if (!(beta1 > 0.0 && beta1 < 1.0)) throw ConfigError("train.beta1 must lie in (0, 1)");
  if (!(beta2 > 0.0 && beta2 < 1.0)) throw ConfigError("train.beta2 must lie in (0, 1)");
  if (!(epsilon > 0.0)) throw ConfigError("train.epsilon must be positive");
  if (max_epochs == 0) throw ConfigError("train.max_epochs must be positive");
  if (hidden1 == 0 || hidden2 == 0) throw ConfigError("hidden widths must be positive");
}

std::string train_report_json(const TrainReport& report) {
  nlohmann::ordered_json j;
  j["stopped_epoch"] = report.stopped_epoch;
  j["best_epoch"] = report.best_epoch;
  auto& epochs = j["epochs"] = nlohmann::ordered_json::array();
  for (const auto& e : report.epochs) {
    nlohmann::ordered_json row;
    row["train_loss"] = e.train_loss;
    row["train_accuracy"] = e.train_accuracy;
    row["validation_loss"] = e.validation_loss;
    row["validation_accuracy"] = e.validation_accuracy;
    epochs.push_back(row);
  }
  return j.dump(2) + "\n";
}

TrainReport parse_train_report(std::string_view json) {
  auto j = nlohmann::json::parse(json);
  TrainReport r;
  r.stopped_epoch = j.at("stopped_epoch").get<std::size_t>();
  r.best_epoch = j.at("best_epoch").get<std::size_t>();
  for (const auto& e : j.at("epochs")) {
    r.epochs.push_back({e.at("train_loss").get<double>(), e.at("train_accuracy").get<double>(),
                        e.at("validation_loss").get<double>(), e.at("validation_accuracy").get<double>()});
  }
  return r;
}

std::vector<Example> EmbeddedSet::examples() const {
  std::vector<Example> out;
  out.reserve(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) out.push_back({inputs[i], labels[i]});
  return out;
}

EmbeddedSet embed_dataset(const SentenceDataset& dataset, EmbeddingBackend& backend) {
  EmbeddedSet set;
  std::map<std::string, std::size_t> seen;
  set.inputs.reserve(dataset.size());
  for (const auto& s : dataset.samples) {
    if (auto it = seen.find(s.text); it != seen.end()) {
      set.inputs.push_back(set.inputs[it->second]);
    } else {
      seen.emplace(s.text, set.inputs.size());
      set.inputs.push_back(embed(backend, s.text));
    }
    set.labels.push_back(dataset.label_index(s));
  }
  return set;
}

double accuracy(const MlpClassifier& model, std::span<const Example> examples) {
  if (examples.empty()) return 0.0;
  std::size_t hits = 0;
  for (const auto& ex : examples) hits += argmax(model.logits(ex.x)) == ex.label;
  return static_cast<double>(hits) / static_cast<double>(examples.size());
}

TrainResult train(MlpClassifier model, const EmbeddedSet& train_set, const EmbeddedSet& validation_set,
                  const Hyperparams& hp) {
  hp.validate();
  if (train_set.inputs.empty()) throw EmptyDataset("training set is empty");
  if (validation_set.inputs.empty()) throw EmptyDataset("validation set is empty");
  const auto train_examples = train_set.examples();
  const auto validation_examples = validation_set.examples();
  const auto adam = hp.adam();

  AdamState state(model);
  TrainReport report;
  MlpClassifier best = model;
  double best_loss = std::numeric_limits<double>::infinity();
  std::size_t stale = 0;
  std::vector<Example> batch;

  for (std::size_t epoch = 1; epoch <= hp.max_epochs; ++epoch) {
    for (const auto& indices : batch_indices(train_examples.size(), hp.batch_size, combine_seed(hp.shuffle_seed, epoch))) {
      batch.clear();
      for (auto i : indices) batch.push_back(train_examples[i]);
      auto lg = loss_and_gradients(model, batch);
      adam_step(state, model, lg.gradients, adam);
    }
    EpochStats stats;
    stats.train_loss = mean_loss(model, train_examples);
    stats.train_accuracy = accuracy(model, train_examples);
    stats.validation_loss = mean_loss(model, validation_examples);
    stats.validation_accuracy = accuracy(model, validation_examples);
    if (!std::isfinite(stats.train_loss) || !std::isfinite(stats.validation_loss)) {
      throw NonFiniteLoss("loss diverged in epoch " + std::to_string(epoch));
    }
    report.epochs.push_back(stats);
    report.stopped_epoch = epoch;

    if (stats.validation_loss < best_loss) {
      best_loss = stats.validation_loss;
      best = model;
      report.best_epoch = epoch;
      stale = 0;
    } else if (++stale >= hp.patience) {
      break;
    }
  }
  return {std::move(best), std::move(report)};
}

TrainResult train(const SentenceDataset& train_set, const SentenceDataset& validation_set, const Hyperparams& hp,
                  EmbeddingBackend& backend) {
  if (train_set.empty()) throw EmptyDataset("training set is empty");
  if (validation_set.empty()) throw EmptyDataset("validation set is empty");
  if (!(train_set.label_set == validation_set.label_set)) {
    throw ValidationError("training and validation label sets differ");
  }
  auto model = MlpClassifier::initialized(backend.dimension(), hp.hidden1, hp.hidden2, train_set.label_set,
                                          backend.name(), hp.init_seed);
  return train(std::move(model), embed_dataset(train_set, backend), embed_dataset(validation_set, backend), hp);
}

}  // namespace ccv
