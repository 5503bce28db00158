#include <gtest/gtest.h>

#include <cmath>

#include "ccv/error.hpp"
#include "ccv/hash.hpp"
#include "ccv/mlp.hpp"
#include "oracles.hpp"

using namespace ccv;

namespace {

LabelSet labels(std::size_t c) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i + 1 < c; ++i) names.push_back("c" + std::to_string(i));
  names.push_back("none");
  return {AttributeKind::Color, names, "none"};
}

Vector random_vector(Rng& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
  Vector v(n);
  for (auto& x : v) x = rng.uniform(lo, hi);
  return v;
}

double max_relative_gradient_error(std::uint64_t seed) {
  auto model = MlpClassifier::initialized(8, 6, 5, labels(4), "test", seed);
  Rng rng(seed + 100);
  for (auto& L : model.layers()) {
    for (auto& b : L.bias) b = rng.uniform(-0.5, 0.5);
  }
  std::vector<Vector> xs;
  std::vector<Example> batch;
  for (int i = 0; i < 8; ++i) xs.push_back(random_vector(rng, 8));
  for (int i = 0; i < 8; ++i) batch.push_back({xs[i], rng.below(4)});
  const auto analytic = loss_and_gradients(model, batch);

  const double h = 1e-5;
  double worst = 0.0;
  for (std::size_t l = 0; l < model.layers().size(); ++l) {
    auto check = [&](double& param, double grad) {
      const double saved = param;
      param = saved + h;
      const double up = mean_loss(model, batch);
      param = saved - h;
      const double down = mean_loss(model, batch);
      param = saved;
      const double numeric = (up - down) / (2 * h);
      const double err = std::abs(numeric - grad) / std::max(1e-8, std::abs(numeric) + std::abs(grad));
      worst = std::max(worst, err);
    };
    auto& L = model.layers()[l];
    const auto& G = analytic.gradients[l];
    for (std::size_t i = 0; i < L.weight.size(); ++i) check(L.weight[i], G.weight[i]);
    for (std::size_t i = 0; i < L.bias.size(); ++i) check(L.bias[i], G.bias[i]);
  }
  return worst;
}

}  // namespace

TEST(Mlp, ZeroModelIsUniform) {
  MlpClassifier m(5, 4, 3, labels(6), "test");
  auto p = m.forward(Vector{1, 2, 3, 4, 5});
  for (double x : p) EXPECT_NEAR(x, 1.0 / 6, 1e-15);
  EXPECT_EQ(argmax(p), 0u);
}

TEST(Mlp, MatchesNaiveForward) {
  Rng rng(5);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto m = MlpClassifier::initialized(12, 7, 5, labels(4), "test", seed);
    for (auto& L : m.layers()) {
      for (auto& b : L.bias) b = rng.uniform(-0.3, 0.3);
    }
    auto x = random_vector(rng, 12);
    if (seed % 2) {
      for (std::size_t i = 1; i < x.size(); ++i) x[i] = 0.0;  // exercises the sparse path
    }
    auto got = m.forward(x);
    auto want = oracle::naive_forward(m, x);
    for (std::size_t k = 0; k < got.size(); ++k) EXPECT_NEAR(got[k], want[k], 1e-10);
  }
}

TEST(Mlp, SoftmaxContracts) {
  Rng rng(8);
  auto m = MlpClassifier::initialized(16, 8, 8, labels(5), "test", 1);
  for (int i = 0; i < 1000; ++i) {
    auto p = m.forward(random_vector(rng, 16, -50, 50));
    double s = 0.0;
    for (double x : p) {
      EXPECT_GE(x, 0.0);
      s += x;
    }
    EXPECT_LT(std::abs(s - 1.0), 1e-9);
  }
  auto big = softmax(Vector{1000.0, 1000.0, -1000.0});
  EXPECT_NEAR(big[0], 0.5, 1e-12);
  EXPECT_EQ(big[2], 0.0);
}

TEST(Mlp, ArgmaxTieBreak) {
  EXPECT_EQ(argmax(Vector{0.2, 0.4, 0.4}), 1u);
  EXPECT_EQ(argmax(Vector{0.8, 1.6, 1.6}), 1u);  // scaling tied maxima keeps the order
  EXPECT_EQ(argmax(Vector{1.0}), 0u);
}

TEST(Mlp, AnalyticLosses) {
  // Confident correct output: large margin on class 2.
  MlpClassifier m(2, 2, 2, labels(3), "test");
  m.layers()[2].bias = {-100.0, -100.0, 100.0};
  Vector x{0.0, 0.0};
  std::vector<Example> batch{{x, 2}};
  EXPECT_LT(mean_loss(m, batch), 1e-12);
  MlpClassifier u(2, 2, 2, labels(7), "test");
  std::vector<Example> ub{{x, 3}, {x, 0}};
  EXPECT_NEAR(loss_and_gradients(u, ub).loss, std::log(7.0), 1e-9);
}

TEST(Mlp, GradientsMatchFiniteDifferences) {
  for (std::uint64_t seed : {1u, 2u, 3u}) EXPECT_LT(max_relative_gradient_error(seed), 1e-4) << seed;
}

TEST(Mlp, ErrorPaths) {
  MlpClassifier m(3, 2, 2, labels(3), "test");
  EXPECT_THROW(m.forward(Vector{1.0}), DimensionMismatch);
  EXPECT_THROW(loss_and_gradients(m, std::vector<Example>{}), EmptyDataset);
  Vector x{1, 2, 3};
  EXPECT_THROW(loss_and_gradients(m, std::vector<Example>{{x, 7}}), UnknownLabel);
  m.layers()[2].bias[1] = std::nan("");
  EXPECT_THROW(loss_and_gradients(m, std::vector<Example>{{x, 0}}), NonFiniteLoss);
}

TEST(Mlp, InitializationBounds) {
  auto m = MlpClassifier::initialized(100, 20, 10, labels(4), "test", 9);
  EXPECT_EQ(m.dims(), (std::vector<std::size_t>{100, 20, 10, 4}));
  EXPECT_EQ(m.parameter_count(), 100u * 20 + 20 + 20 * 10 + 10 + 10 * 4 + 4);
  for (const auto& L : m.layers()) {
    const double limit = std::sqrt(6.0 / static_cast<double>(L.in));
    for (double w : L.weight) EXPECT_LE(std::abs(w), limit);
    for (double b : L.bias) EXPECT_EQ(b, 0.0);
  }
  EXPECT_EQ(m, MlpClassifier::initialized(100, 20, 10, labels(4), "test", 9));
  EXPECT_NE(m, MlpClassifier::initialized(100, 20, 10, labels(4), "test", 10));
}

TEST(Adam, FirstStepIsSignedLearningRate) {
  for (double g : {3.0, -0.25, 1e-3}) {
    std::vector<double> p{1.0}, m{0.0}, v{0.0};
    std::vector<double> grad{g};
    adam_update(p, grad, m, v, 1, {});
    const double expected = 1.0 - 0.001 * g / (std::abs(g) + 1e-7);
    EXPECT_NEAR(p[0], expected, 1e-15);
  }
}

TEST(Adam, ZeroGradientLeavesParameters) {
  std::vector<double> p{0.5, -2.0}, m(2), v(2), g(2);
  for (std::uint64_t step = 1; step <= 3; ++step) adam_update(p, g, m, v, step, {});
  EXPECT_EQ(p, (std::vector<double>{0.5, -2.0}));
}

TEST(Adam, MinimizesSquare) {
  // Hand recurrence on f(w) = w^2 with gradient 2w.
  std::vector<double> w{1.0}, m{0.0}, v{0.0};
  double prev = 1.0;
  for (std::uint64_t step = 1; step <= 5; ++step) {
    std::vector<double> g{2 * w[0]};
    adam_update(w, g, m, v, step, {});
    EXPECT_LT(std::abs(w[0]), prev);
    prev = std::abs(w[0]);
  }
  // Constant-sign gradient: every step moves by about lr.
  EXPECT_NEAR(w[0], 1.0 - 5 * 0.001, 1e-4);
}

TEST(Adam, FullBatchLossNonIncreasing) {
  auto model = MlpClassifier::initialized(6, 5, 4, labels(3), "test", 4);
  Rng rng(4);
  std::vector<Vector> xs;
  std::vector<Example> batch;
  for (int i = 0; i < 12; ++i) xs.push_back(random_vector(rng, 6));
  for (int i = 0; i < 12; ++i) batch.push_back({xs[i], static_cast<std::size_t>(i % 3)});
  AdamState state(model);
  double prev = mean_loss(model, batch);
  for (int step = 0; step < 5; ++step) {
    adam_step(state, model, loss_and_gradients(model, batch).gradients, {});
    const double now = mean_loss(model, batch);
    EXPECT_LE(now, prev);
    prev = now;
  }
  EXPECT_EQ(state.step(), 5u);
}
