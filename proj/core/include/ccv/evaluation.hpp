#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "ccv/vocabulary.hpp"

namespace ccv {

// Counts indexed [gold][predicted] over a label set.
class ConfusionMatrix {
 public:
  ConfusionMatrix() = default;
  explicit ConfusionMatrix(LabelSet labels);

  const LabelSet& labels() const noexcept { return labels_; }
  std::size_t size() const noexcept { return labels_.size(); }
  std::size_t at(std::size_t gold, std::size_t predicted) const { return counts_.at(gold * size() + predicted); }
  void add(std::size_t gold, std::size_t predicted, std::size_t n = 1);
  std::size_t total() const noexcept;
  std::size_t trace() const noexcept;
  std::size_t row_sum(std::size_t gold) const;
  std::size_t column_sum(std::size_t predicted) const;

  bool operator==(const ConfusionMatrix&) const = default;

 private:
  LabelSet labels_;
  std::vector<std::size_t> counts_;
};

// Throws LengthMismatch or UnknownLabel.
ConfusionMatrix confusion(std::span<const std::string> golds, std::span<const std::string> predictions,
                          const LabelSet& labels);

struct ClassMetrics {
  std::string label;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
  bool operator==(const ClassMetrics&) const = default;
};

struct AverageMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  bool operator==(const AverageMetrics&) const = default;
};

struct EvaluationReport {
  AttributeKind attribute = AttributeKind::Color;
  std::vector<ClassMetrics> classes;
  double accuracy = 0.0;
  std::size_t total = 0;
  // Macro averages cover classes that occur as gold or prediction.
  AverageMetrics macro;
  AverageMetrics weighted;
  std::map<std::size_t, double> top_k;  // k -> accuracy
  ConfusionMatrix matrix;

  bool operator==(const EvaluationReport&) const = default;
};

// Zero denominators yield 0 for that metric.
EvaluationReport metrics(const ConfusionMatrix& matrix);

// Fraction of items whose gold index is among the first k ranked labels.
// Throws InvalidK (k == 0 or a ranking shorter than k) or LengthMismatch.
double top_k_accuracy(std::span<const std::size_t> golds, std::span<const std::vector<std::size_t>> rankings,
                      std::size_t k);

std::string report_json(const EvaluationReport& report);
EvaluationReport parse_report(std::string_view json);
// Aligned table with values rounded to two decimals.
std::string format_report(const EvaluationReport& report);
// Header row of predicted labels; one row per gold label.
std::string confusion_csv(const ConfusionMatrix& matrix);

}  // namespace ccv
