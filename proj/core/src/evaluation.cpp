#include "ccv/evaluation.hpp"

#include <cstdio>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "ccv/error.hpp"

namespace ccv {

ConfusionMatrix::ConfusionMatrix(LabelSet labels) : labels_(std::move(labels)), counts_(labels_.size() * labels_.size()) {}

void ConfusionMatrix::add(std::size_t gold, std::size_t predicted, std::size_t n) {
  if (gold >= size() || predicted >= size()) throw UnknownLabel("class index out of range");
  counts_[gold * size() + predicted] += n;
}

std::size_t ConfusionMatrix::total() const noexcept {
  std::size_t n = 0;
  for (auto c : counts_) n += c;
  return n;
}

std::size_t ConfusionMatrix::trace() const noexcept {
  std::size_t n = 0;
  for (std::size_t i = 0; i < size(); ++i) n += counts_[i * size() + i];
  return n;
}

std::size_t ConfusionMatrix::row_sum(std::size_t gold) const {
  std::size_t n = 0;
  for (std::size_t p = 0; p < size(); ++p) n += at(gold, p);
  return n;
}

std::size_t ConfusionMatrix::column_sum(std::size_t predicted) const {
  std::size_t n = 0;
  for (std::size_t g = 0; g < size(); ++g) n += at(g, predicted);
  return n;
}

ConfusionMatrix confusion(std::span<const std::string> golds, std::span<const std::string> predictions,
                          const LabelSet& labels) {
  if (golds.size() != predictions.size()) {
    throw LengthMismatch(std::to_string(golds.size()) + " gold labels vs " + std::to_string(predictions.size()) +
                         " predictions");
  }
  ConfusionMatrix m(labels);
  for (std::size_t i = 0; i < golds.size(); ++i) m.add(labels.index_of(golds[i]), labels.index_of(predictions[i]));
  return m;
}

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

EvaluationReport metrics(const ConfusionMatrix& matrix) {
  EvaluationReport r;
  r.matrix = matrix;
  r.attribute = matrix.labels().attribute();
  r.total = matrix.total();
  r.accuracy = ratio(matrix.trace(), r.total);
  std::size_t active = 0;
  for (std::size_t k = 0; k < matrix.size(); ++k) {
    ClassMetrics c;
    c.label = matrix.labels().label(k);
    c.support = matrix.row_sum(k);
    const auto predicted = matrix.column_sum(k);
    c.precision = ratio(matrix.at(k, k), predicted);
    c.recall = ratio(matrix.at(k, k), c.support);
    c.f1 = c.precision + c.recall > 0.0 ? 2.0 * c.precision * c.recall / (c.precision + c.recall) : 0.0;
    if (c.support > 0 || predicted > 0) {
      ++active;
      r.macro.precision += c.precision;
      r.macro.recall += c.recall;
      r.macro.f1 += c.f1;
    }
    const double w = ratio(c.support, r.total);
    r.weighted.precision += w * c.precision;
    r.weighted.recall += w * c.recall;
    r.weighted.f1 += w * c.f1;
    r.classes.push_back(std::move(c));
  }
  if (active > 0) {
    r.macro.precision /= static_cast<double>(active);
    r.macro.recall /= static_cast<double>(active);
    r.macro.f1 /= static_cast<double>(active);
  }
  return r;
}

double top_k_accuracy(std::span<const std::size_t> golds, std::span<const std::vector<std::size_t>> rankings,
                      std::size_t k) {
  if (k == 0) throw InvalidK("k must be at least 1");
  if (golds.size() != rankings.size()) throw LengthMismatch("gold and ranking counts differ");
  if (golds.empty()) return 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < golds.size(); ++i) {
    const auto& r = rankings[i];
    if (r.size() < k) throw InvalidK("ranking " + std::to_string(i) + " has fewer than " + std::to_string(k) + " labels");
    hits += std::find(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(k), golds[i]) != r.begin() + static_cast<std::ptrdiff_t>(k);
  }
  return static_cast<double>(hits) / static_cast<double>(golds.size());
}

std::string report_json(const EvaluationReport& r) {
  nlohmann::ordered_json j;
  j["attribute"] = std::string(to_string(r.attribute));
  j["total"] = r.total;
  j["accuracy"] = r.accuracy;
  auto avg = [](const AverageMetrics& a) {
    nlohmann::ordered_json o;
    o["precision"] = a.precision;
    o["recall"] = a.recall;
    o["f1"] = a.f1;
    return o;
  };
  j["macro"] = avg(r.macro);
  j["weighted"] = avg(r.weighted);
  auto& topk = j["top_k"] = nlohmann::ordered_json::object();
  for (const auto& [k, acc] : r.top_k) topk[std::to_string(k)] = acc;
  auto& classes = j["classes"] = nlohmann::ordered_json::array();
  for (const auto& c : r.classes) {
    nlohmann::ordered_json o;
    o["label"] = c.label;
    o["precision"] = c.precision;
    o["recall"] = c.recall;
    o["f1"] = c.f1;
    o["support"] = c.support;
    classes.push_back(o);
  }
  j["sentinel"] = r.matrix.labels().sentinel();
  auto& rows = j["confusion"] = nlohmann::ordered_json::array();
  for (std::size_t g = 0; g < r.matrix.size(); ++g) {
    auto row = nlohmann::ordered_json::array();
    for (std::size_t p = 0; p < r.matrix.size(); ++p) row.push_back(r.matrix.at(g, p));
    rows.push_back(row);
  }
  return j.dump(2) + "\n";
}

EvaluationReport parse_report(std::string_view json) {
  auto j = nlohmann::json::parse(json);
  std::vector<std::string> labels;
  for (const auto& c : j.at("classes")) labels.push_back(c.at("label").get<std::string>());
  LabelSet set(parse_attribute(j.at("attribute").get<std::string>()), labels, j.at("sentinel").get<std::string>());
  ConfusionMatrix m(set);
  const auto& rows = j.at("confusion");
  for (std::size_t g = 0; g < rows.size(); ++g) {
    for (std::size_t p = 0; p < rows[g].size(); ++p) m.add(g, p, rows[g][p].get<std::size_t>());
  }
  EvaluationReport r;
  r.matrix = m;
  r.attribute = set.attribute();
  r.total = j.at("total").get<std::size_t>();
  r.accuracy = j.at("accuracy").get<double>();
  auto avg = [](const nlohmann::json& o) {
    return AverageMetrics{o.at("precision").get<double>(), o.at("recall").get<double>(), o.at("f1").get<double>()};
  };
  r.macro = avg(j.at("macro"));
  r.weighted = avg(j.at("weighted"));
  for (const auto& [k, acc] : j.at("top_k").items()) r.top_k[std::stoul(k)] = acc.get<double>();
  for (const auto& c : j.at("classes")) {
    r.classes.push_back({c.at("label").get<std::string>(), c.at("precision").get<double>(),
                         c.at("recall").get<double>(), c.at("f1").get<double>(), c.at("support").get<std::size_t>()});
  }
  return r;
}

std::string format_report(const EvaluationReport& r) {
  std::size_t width = 12;
  for (const auto& c : r.classes) width = std::max(width, c.label.size());
  const int w = static_cast<int>(width);
  std::ostringstream out;
  out << std::fixed << std::setprecision(2);
  out << std::left << std::setw(w) << to_string(r.attribute) << std::right << std::setw(11) << "precision"
      << std::setw(9) << "recall" << std::setw(9) << "f1" << std::setw(9) << "support" << '\n';
  for (const auto& c : r.classes) {
    if (c.support == 0 && c.precision == 0.0) continue;
    out << std::left << std::setw(w) << c.label << std::right << std::setw(11) << c.precision << std::setw(9)
        << c.recall << std::setw(9) << c.f1 << std::setw(9) << c.support << '\n';
  }
  out << '\n';
  out << std::left << std::setw(w) << "accuracy" << std::right << std::setw(29) << r.accuracy << std::setw(9)
      << r.total << '\n';
  out << std::left << std::setw(w) << "macro avg" << std::right << std::setw(11) << r.macro.precision << std::setw(9)
      << r.macro.recall << std::setw(9) << r.macro.f1 << std::setw(9) << r.total << '\n';
  out << std::left << std::setw(w) << "weighted avg" << std::right << std::setw(11) << r.weighted.precision
      << std::setw(9) << r.weighted.recall << std::setw(9) << r.weighted.f1 << std::setw(9) << r.total << '\n';
  for (const auto& [k, acc] : r.top_k) {
    out << std::left << std::setw(w) << ("top-" + std::to_string(k)) << std::right << std::setw(29) << acc << '\n';
  }
  return out.str();
}

std::string confusion_csv(const ConfusionMatrix& m) {
  std::ostringstream out;
  out << "gold\\predicted";
  for (const auto& l : m.labels().classes()) out << ',' << l;
  out << '\n';
  for (std::size_t g = 0; g < m.size(); ++g) {
    out << m.labels().label(g);
    for (std::size_t p = 0; p < m.size(); ++p) out << ',' << m.at(g, p);
    out << '\n';
  }
  return out.str();
}

}  // namespace ccv
