#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ccv/embedding.hpp"
#include "ccv/vocabulary.hpp"

namespace ccv {

// Fully connected layer; weight is row-major [out][in].
struct DenseLayer {
  std::size_t in = 0;
  std::size_t out = 0;
  std::vector<double> weight;
  std::vector<double> bias;

  DenseLayer() = default;
  DenseLayer(std::size_t in_dim, std::size_t out_dim) : in(in_dim), out(out_dim), weight(in_dim * out_dim), bias(out_dim) {}
  double& w(std::size_t o, std::size_t i) { return weight[o * in + i]; }
  double w(std::size_t o, std::size_t i) const { return weight[o * in + i]; }
  bool operator==(const DenseLayer&) const = default;
};

// m -> h1 -> h2 -> c feed-forward classifier: rectifier on the two hidden
// layers, softmax on the output.
class MlpClassifier {
 public:
  // All parameters zero.
  MlpClassifier(std::size_t input_dim, std::size_t hidden1, std::size_t hidden2, LabelSet labels,
                std::string backend_name);

  // Uniform(-sqrt(6 / fan_in), sqrt(6 / fan_in)) weights, zero biases.
  static MlpClassifier initialized(std::size_t input_dim, std::size_t hidden1, std::size_t hidden2, LabelSet labels,
                                   std::string backend_name, std::uint64_t seed);

  std::size_t input_dim() const noexcept { return layers_[0].in; }
  std::size_t num_classes() const noexcept { return layers_[2].out; }
  std::vector<std::size_t> dims() const;
  const LabelSet& labels() const noexcept { return labels_; }
  const std::string& backend_name() const noexcept { return backend_; }

  std::vector<DenseLayer>& layers() noexcept { return layers_; }
  const std::vector<DenseLayer>& layers() const noexcept { return layers_; }
  std::size_t parameter_count() const noexcept;

  // Throws DimensionMismatch.
  Vector logits(std::span<const double> x) const;
  Vector forward(std::span<const double> x) const;

  bool operator==(const MlpClassifier&) const = default;

 private:
  MlpClassifier(std::vector<DenseLayer> layers, LabelSet labels, std::string backend_name);
  friend MlpClassifier make_classifier(std::vector<DenseLayer>, LabelSet, std::string);

  std::vector<DenseLayer> layers_;
  LabelSet labels_;
  std::string backend_;
};

// Builds a classifier from explicit layers (used by the model reader).
MlpClassifier make_classifier(std::vector<DenseLayer> layers, LabelSet labels, std::string backend_name);

// Numerically stable softmax.
Vector softmax(std::span<const double> logits);

// Index of the largest value; ties go to the lowest index.
std::size_t argmax(std::span<const double> v);

struct Example {
  std::span<const double> x;
  std::size_t label = 0;
};

struct LossAndGradients {
  double loss = 0.0;
  std::vector<DenseLayer> gradients;  // same shapes as the model's layers
};

// Mean cross-entropy over the batch with exact backpropagated gradients.
// Throws NonFiniteLoss, EmptyDataset or UnknownLabel.
LossAndGradients loss_and_gradients(const MlpClassifier& model, std::span<const Example> batch);
double mean_loss(const MlpClassifier& model, std::span<const Example> batch);

struct AdamOptions {
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.99;
  double epsilon = 1e-7;
};

// Bias-corrected Adam on one flat parameter tensor. `step` is the 1-based
// index of this update.
void adam_update(std::span<double> params, std::span<const double> grads, std::span<double> first_moment,
                 std::span<double> second_moment, std::uint64_t step, const AdamOptions& options);

class AdamState {
 public:
  explicit AdamState(const MlpClassifier& model);
  std::uint64_t step() const noexcept { return step_; }

 private:
  friend void adam_step(AdamState&, MlpClassifier&, const std::vector<DenseLayer>&, const AdamOptions&);
  std::vector<DenseLayer> first_;
  std::vector<DenseLayer> second_;
  std::uint64_t step_ = 0;
};

void adam_step(AdamState& state, MlpClassifier& model, const std::vector<DenseLayer>& gradients,
               const AdamOptions& options);

}  // namespace ccv
