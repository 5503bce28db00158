#pragma once

// Test-side reference data and naive reimplementations, written
// independently of the library code they check.

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ccv/evaluation.hpp"
#include "ccv/mlp.hpp"
#include "ccv/vocabulary.hpp"

namespace oracle {

// Color grouping table, row by row as printed (gold appears twice).
inline const std::vector<std::pair<std::string, std::string>>& color_table() {
  static const std::vector<std::pair<std::string, std::string>> rows = {
      {"black", "black"},    {"blue", "blue"},         {"navy blue", "blue"}, {"teal", "blue"},
      {"brown", "brown"},    {"tan", "brown"},         {"gray", "gray"},      {"silver", "gray"},
      {"green", "green"},    {"turquoise", "green"},   {"gold", "metallic"},  {"metallic", "metallic"},
      {"gold", "metallic"},  {"yellow", "yellow"},     {"amber", "yellow"},   {"coral", "orange"},
      {"orange", "orange"},  {"brass", "orange"},      {"fuchsia", "pink"},   {"pink", "pink"},
      {"lavender", "purple"}, {"purple", "purple"},    {"burgundy", "red"},   {"maroon", "red"},
      {"red", "red"},        {"rust", "red"},          {"beige", "white"},    {"cream", "white"},
      {"white", "white"},    {"clear", "white"},
  };
  return rows;
}

struct PaperRow {
  std::string label;
  double precision, recall, f1;
  std::size_t support;
};

// Color performance table as published.
inline const std::vector<PaperRow>& color_performance() {
  static const std::vector<PaperRow> rows = {
      {"black", 1.00, 1.00, 1.00, 9}, {"blue", 1.00, 0.90, 0.95, 10},  {"brown", 0.57, 1.00, 0.73, 4},
      {"green", 1.00, 1.00, 1.00, 3}, {"no-color", 0.86, 0.75, 0.80, 8}, {"pink", 1.00, 0.67, 0.80, 3},
      {"red", 1.00, 0.50, 0.67, 4},   {"white", 0.91, 1.00, 0.96, 32}, {"yellow", 1.00, 0.67, 0.80, 3},
  };
  return rows;
}

// A confusion matrix consistent with every row of that table: 69 of 76 on
// the diagonal, the seven misses placed so each row and column sum matches.
inline ccv::ConfusionMatrix color_fixture() {
  ccv::ConfusionMatrix m(ccv::default_color_lexicon().label_set());
  const auto& ls = m.labels();
  auto add = [&](const char* g, const char* p, std::size_t n) { m.add(ls.index_of(g), ls.index_of(p), n); };
  add("black", "black", 9);
  add("blue", "blue", 9);
  add("blue", "white", 1);
  add("brown", "brown", 4);
  add("green", "green", 3);
  add("no-color", "no-color", 6);
  add("no-color", "white", 1);
  add("no-color", "brown", 1);
  add("pink", "pink", 2);
  add("pink", "white", 1);
  add("red", "red", 2);
  add("red", "brown", 2);
  add("white", "white", 32);
  add("yellow", "yellow", 2);
  add("yellow", "no-color", 1);
  return m;
}

// Plain triple-loop forward pass.
inline std::vector<double> naive_forward(const ccv::MlpClassifier& model, const std::vector<double>& x) {
  std::vector<double> a = x;
  const auto& layers = model.layers();
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto& L = layers[l];
    std::vector<double> z(L.out);
    for (std::size_t o = 0; o < L.out; ++o) {
      double s = L.bias[o];
      for (std::size_t i = 0; i < L.in; ++i) s += L.weight[o * L.in + i] * a[i];
      z[o] = (l + 1 < layers.size()) ? std::max(0.0, s) : s;
    }
    a = std::move(z);
  }
  double mx = *std::max_element(a.begin(), a.end());
  double sum = 0.0;
  for (double& v : a) sum += (v = std::exp(v - mx));
  for (double& v : a) v /= sum;
  return a;
}

// Plurality winner by brute force: count, then break ties by mean voter
// probability, then by lower label.
inline std::size_t plurality(const std::vector<std::size_t>& votes, const std::vector<double>& probs) {
  std::map<std::size_t, std::pair<std::size_t, double>> tally;
  for (std::size_t i = 0; i < votes.size(); ++i) {
    tally[votes[i]].first += 1;
    tally[votes[i]].second += probs[i];
  }
  std::size_t best = tally.begin()->first;
  for (const auto& [label, t] : tally) {
    const auto& b = tally[best];
    const double mean = t.second / t.first, best_mean = b.second / b.first;
    if (t.first > b.first || (t.first == b.first && mean > best_mean)) best = label;
  }
  return best;
}

}  // namespace oracle
