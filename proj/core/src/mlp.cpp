#include "ccv/mlp.hpp"

#include <algorithm>
#include <cmath>

#include "ccv/error.hpp"
#include "ccv/hash.hpp"

namespace ccv {

namespace {

// y = W x + b. Sparse inputs (the hashing embedder's) skip zero columns.
void affine(const DenseLayer& layer, std::span<const double> x, std::span<double> y) {
  std::copy(layer.bias.begin(), layer.bias.end(), y.begin());
  std::size_t nonzero = 0;
  for (double v : x) nonzero += v != 0.0;
  if (nonzero * 4 < layer.in) {
    for (std::size_t i = 0; i < layer.in; ++i) {
      const double xi = x[i];
      if (xi == 0.0) continue;
      for (std::size_t o = 0; o < layer.out; ++o) y[o] += layer.weight[o * layer.in + i] * xi;
    }
    return;
  }
  for (std::size_t o = 0; o < layer.out; ++o) {
    const double* row = layer.weight.data() + o * layer.in;
    double acc = 0.0;
    for (std::size_t i = 0; i < layer.in; ++i) acc += row[i] * x[i];
    y[o] += acc;
  }
}

void relu(std::span<double> v) {
  for (double& x : v) x = x > 0.0 ? x : 0.0;
}

double log_sum_exp(std::span<const double> z) {
  const double m = *std::max_element(z.begin(), z.end());
  double s = 0.0;
  for (double v : z) s += std::exp(v - m);
  return m + std::log(s);
}

struct Activations {
  Vector h1, h2, z;
};

Activations run(const MlpClassifier& model, std::span<const double> x) {
  if (x.size() != model.input_dim()) {
    throw DimensionMismatch("input has dimension " + std::to_string(x.size()) + ", model expects " +
                            std::to_string(model.input_dim()));
  }
  const auto& L = model.layers();
  Activations a{Vector(L[0].out), Vector(L[1].out), Vector(L[2].out)};
  affine(L[0], x, a.h1);
  relu(a.h1);
  affine(L[1], a.h1, a.h2);
  relu(a.h2);
  affine(L[2], a.h2, a.z);
  return a;
}

}  // namespace

MlpClassifier::MlpClassifier(std::size_t input_dim, std::size_t hidden1, std::size_t hidden2, LabelSet labels,
                             std::string backend_name)
    : MlpClassifier({DenseLayer(input_dim, hidden1), DenseLayer(hidden1, hidden2), DenseLayer(hidden2, labels.size())},
                    labels, std::move(backend_name)) {}

MlpClassifier::MlpClassifier(std::vector<DenseLayer> layers, LabelSet labels, std::string backend_name)
    : layers_(std::move(layers)), labels_(std::move(labels)), backend_(std::move(backend_name)) {
  if (layers_.size() != 3) throw DimensionMismatch("classifier needs exactly 3 layers");
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const auto& l = layers_[i];
    if (l.in == 0 || l.out == 0) throw DimensionMismatch("layer dimensions must be positive");
    if (l.weight.size() != l.in * l.out || l.bias.size() != l.out) throw DimensionMismatch("layer storage size mismatch");
    if (i > 0 && layers_[i - 1].out != l.in) throw DimensionMismatch("consecutive layer dimensions disagree");
  }
  if (layers_.back().out != labels_.size()) throw DimensionMismatch("output width differs from the label count");
}

MlpClassifier make_classifier(std::vector<DenseLayer> layers, LabelSet labels, std::string backend_name) {
  return MlpClassifier(std::move(layers), std::move(labels), std::move(backend_name));
}

MlpClassifier MlpClassifier::initialized(std::size_t input_dim, std::size_t hidden1, std::size_t hidden2,
                                         LabelSet labels, std::string backend_name, std::uint64_t seed) {
  MlpClassifier m(input_dim, hidden1, hidden2, std::move(labels), std::move(backend_name));
  Rng rng(seed);
  for (auto& layer : m.layers_) {
    const double limit = std::sqrt(6.0 / static_cast<double>(layer.in));
    for (double& w : layer.weight) w = rng.uniform(-limit, limit);
  }
  return m;
}

std::vector<std::size_t> MlpClassifier::dims() const {
  return {layers_[0].in, layers_[0].out, layers_[1].out, layers_[2].out};
}

std::size_t MlpClassifier::parameter_count() const noexcept {
  std::size_t n = 0;
  for (const auto& l : layers_) n += l.weight.size() + l.bias.size();
  return n;
}

Vector MlpClassifier::logits(std::span<const double> x) const { return run(*this, x).z; }

Vector MlpClassifier::forward(std::span<const double> x) const { return softmax(logits(x)); }

Vector softmax(std::span<const double> logits) {
  const double lse = log_sum_exp(logits);
  Vector p(logits.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::exp(logits[i] - lse);
  return p;
}

std::size_t argmax(std::span<const double> v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

LossAndGradients loss_and_gradients(const MlpClassifier& model, std::span<const Example> batch) {
  if (batch.empty()) throw EmptyDataset("loss over an empty batch");
  const auto& L = model.layers();
  LossAndGradients out;
  out.gradients = {DenseLayer(L[0].in, L[0].out), DenseLayer(L[1].in, L[1].out), DenseLayer(L[2].in, L[2].out)};
  auto& G = out.gradients;
  const double scale = 1.0 / static_cast<double>(batch.size());

  Vector dz(L[2].out), dh2(L[1].out), dh1(L[0].out);
  for (const auto& ex : batch) {
    if (ex.label >= model.num_classes()) throw UnknownLabel("label index " + std::to_string(ex.label) + " out of range");
    const auto a = run(model, ex.x);
    const double lse = log_sum_exp(a.z);
    out.loss += (lse - a.z[ex.label]) * scale;

    for (std::size_t k = 0; k < dz.size(); ++k) dz[k] = (std::exp(a.z[k] - lse) - (k == ex.label ? 1.0 : 0.0)) * scale;

    // Output layer.
    std::fill(dh2.begin(), dh2.end(), 0.0);
    for (std::size_t k = 0; k < L[2].out; ++k) {
      G[2].bias[k] += dz[k];
      for (std::size_t j = 0; j < L[2].in; ++j) {
        G[2].weight[k * L[2].in + j] += dz[k] * a.h2[j];
        dh2[j] += L[2].weight[k * L[2].in + j] * dz[k];
      }
    }
    for (std::size_t j = 0; j < dh2.size(); ++j) {
      if (a.h2[j] <= 0.0) dh2[j] = 0.0;
    }

    // Second hidden layer.
    std::fill(dh1.begin(), dh1.end(), 0.0);
    for (std::size_t k = 0; k < L[1].out; ++k) {
      const double d = dh2[k];
      if (d == 0.0) continue;
      G[1].bias[k] += d;
      for (std::size_t j = 0; j < L[1].in; ++j) {
        G[1].weight[k * L[1].in + j] += d * a.h1[j];
        dh1[j] += L[1].weight[k * L[1].in + j] * d;
      }
    }
    for (std::size_t j = 0; j < dh1.size(); ++j) {
      if (a.h1[j] <= 0.0) dh1[j] = 0.0;
    }

    // First hidden layer; only nonzero input columns contribute.
    for (std::size_t i = 0; i < L[0].in; ++i) {
      const double xi = ex.x[i];
      if (xi == 0.0) continue;
      for (std::size_t k = 0; k < L[0].out; ++k) G[0].weight[k * L[0].in + i] += dh1[k] * xi;
    }
    for (std::size_t k = 0; k < L[0].out; ++k) G[0].bias[k] += dh1[k];
  }
  if (!std::isfinite(out.loss)) throw NonFiniteLoss("cross-entropy loss is not finite");
  return out;
}

double mean_loss(const MlpClassifier& model, std::span<const Example> batch) {
  if (batch.empty()) throw EmptyDataset("loss over an empty batch");
  double total = 0.0;
  for (const auto& ex : batch) {
    const auto z = model.logits(ex.x);
    total += log_sum_exp(z) - z.at(ex.label);
  }
  return total / static_cast<double>(batch.size());
}

void adam_update(std::span<double> params, std::span<const double> grads, std::span<double> first_moment,
                 std::span<double> second_moment, std::uint64_t step, const AdamOptions& o) {
  const double c1 = 1.0 - std::pow(o.beta1, static_cast<double>(step));
  const double c2 = 1.0 - std::pow(o.beta2, static_cast<double>(step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    first_moment[i] = o.beta1 * first_moment[i] + (1.0 - o.beta1) * g;
    second_moment[i] = o.beta2 * second_moment[i] + (1.0 - o.beta2) * g * g;
    const double m_hat = first_moment[i] / c1;
    const double v_hat = second_moment[i] / c2;
    params[i] -= o.learning_rate * m_hat / (std::sqrt(v_hat) + o.epsilon);
  }
}

AdamState::AdamState(const MlpClassifier& model) {
  for (const auto& l : model.layers()) {
    first_.emplace_back(l.in, l.out);
    second_.emplace_back(l.in, l.out);
  }
}

void adam_step(AdamState& state, MlpClassifier& model, const std::vector<DenseLayer>& gradients,
               const AdamOptions& options) {
  auto& layers = model.layers();
  if (gradients.size() != layers.size() || state.first_.size() != layers.size()) {
    throw DimensionMismatch("optimizer state does not match the model");
  }
  ++state.step_;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    if (gradients[l].weight.size() != layers[l].weight.size()) throw DimensionMismatch("gradient shape mismatch");
    adam_update(layers[l].weight, gradients[l].weight, state.first_[l].weight, state.second_[l].weight, state.step_,
                options);
    adam_update(layers[l].bias, gradients[l].bias, state.first_[l].bias, state.second_[l].bias, state.step_, options);
  }
}

}  // namespace ccv
