#include "ccv/pipeline.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ccv/error.hpp"
#include "ccv/hash.hpp"
#include "ccv/model_io.hpp"

namespace ccv {

std::unique_ptr<TranslationProvider> make_provider(const PipelineConfig& config) {
  if (config.provider == "offline") return std::make_unique<OfflineProvider>(config.provider_seed);
  if (config.provider == "identity") return std::make_unique<IdentityProvider>();
  if (config.provider == "endpoint") return std::make_unique<HttpProvider>(HttpProviderOptions{config.provider_endpoint});
  throw ConfigError("augment.provider: unknown provider '" + config.provider + "'");
}

std::unique_ptr<EmbeddingBackend> make_backend(const PipelineConfig& config) {
  if (config.backend == "hashing") return std::make_unique<HashingEmbedder>(config.embedding_dim, config.embedding_seed);
  if (config.backend == "endpoint") return std::make_unique<HttpEmbedder>(config.backend_endpoint, config.embedding_dim);
  throw ConfigError("embed.backend: unknown backend '" + config.backend + "'");
}

const AttributeRun& RunResult::run(AttributeKind kind) const {
  for (const auto& r : runs) {
    if (r.attribute == kind) return r;
  }
  throw Error("no run for attribute " + std::string(to_string(kind)));
}

Pipeline::Pipeline(PipelineConfig config, Vocabulary vocab)
    : config_(std::move(config)), vocab_(std::move(vocab)) {
  config_.validate();
  chains_ = parse_chains(config_.chains);
  provider_ = make_provider(config_);
  cache_ = config_.translation_cache.empty() ? std::make_unique<TranslationCache>()
                                             : std::make_unique<TranslationCache>(config_.translation_cache);
  translator_ = std::make_unique<Translator>(*provider_, cache_.get());
  backend_ = make_backend(config_);
}

std::vector<DescriptionRecord> Pipeline::load_corpus() const {
  if (config_.corpus.empty()) throw ConfigError("corpus: no corpus path configured");
  return ccv::load_corpus(config_.corpus, vocab_);
}

CorpusSplit Pipeline::split(const std::vector<DescriptionRecord>& records) const {
  return split_corpus(records, config_.split_ratio, config_.split_seed, config_.split_stratified);
}

TrainingData Pipeline::training_data(const std::vector<DescriptionRecord>& train_records, AttributeKind attribute) {
  TrainingData d;
  d.full = build_sentence_dataset(train_records, attribute, chains_, *translator_, vocab_, {config_.tokenize});
  d.full.provenance.split_seed = config_.split_seed;
  d.balanced = config_.tokenize ? undersample_sentinel(d.full, config_.balance_fraction, config_.balance_seed) : d.full;
  std::tie(d.train, d.validation) = split_train_validation(d.balanced, config_.validation_ratio, config_.validation_seed);
  return d;
}

SentenceDataset Pipeline::test_data(const std::vector<DescriptionRecord>& test_records, AttributeKind attribute) {
  auto ds = build_sentence_dataset(test_records, attribute, chains_, *translator_, vocab_, {config_.tokenize});
  ds.provenance.split_seed = config_.split_seed;
  return ds;
}

TrainResult Pipeline::train(const TrainingData& data) { return ccv::train(data.train, data.validation, config_.hyper, *backend_); }

DescriptionPrediction Pipeline::predict(const MlpClassifier& model, const DescriptionRecord& record) {
  return predict_description(record.id, record.text, model, *backend_, chains_, *translator_, {config_.tokenize});
}

AttributeEvaluation Pipeline::evaluate(const MlpClassifier& model, const std::vector<DescriptionRecord>& test_records) {
  AttributeEvaluation ev;
  const auto& labels = model.labels();
  std::vector<std::string> golds, preds;
  std::vector<std::size_t> gold_idx;
  std::vector<std::vector<std::size_t>> rankings;
  for (const auto& r : test_records) {
    auto p = predict(model, r);
    golds.push_back(r.gold(labels.attribute()));
    gold_idx.push_back(labels.index_of(golds.back()));
    preds.push_back(labels.label(p.label));
    rankings.push_back(p.ranking);
    ev.predictions.push_back(std::move(p));
  }
  ev.report = metrics(confusion(golds, preds, labels));
  for (std::size_t k = 1; k <= std::min<std::size_t>(3, labels.size()); ++k) {
    ev.report.top_k[k] = top_k_accuracy(gold_idx, rankings, k);
  }
  return ev;
}

RunResult Pipeline::run(const std::vector<DescriptionRecord>& records) {
  RunResult result;
  result.split = split(records);
  assert_disjoint(result.split.train_ids, result.split.test_ids, "corpus split");
  const auto train_records = select(records, result.split.train_ids);
  const auto test_records = select(records, result.split.test_ids);
  for (auto attribute : config_.attributes) {
    auto data = training_data(train_records, attribute);
    const auto test = test_data(test_records, attribute);
    assert_no_leakage(data.full, test);
    assert_no_leakage(data.train, data.validation);
    auto trained = train(data);
    auto evaluation = evaluate(trained.model, test_records);
    result.runs.push_back({attribute, std::move(data), std::move(trained), std::move(evaluation)});
  }
  return result;
}

namespace {

nlohmann::ordered_json trace_json(const DescriptionPrediction& p, const LabelSet& labels) {
  auto sentences = nlohmann::ordered_json::array();
  for (const auto& s : p.sentences) {
    nlohmann::ordered_json js;
    js["sentence_index"] = s.sentence_index;
    js["label"] = labels.label(s.label);
    js["probability"] = s.probability;
    auto variants = nlohmann::ordered_json::array();
    for (const auto& v : s.variants) {
      nlohmann::ordered_json jv;
      jv["variant_index"] = v.variant_index;
      jv["text"] = v.text;
      jv["label"] = labels.label(v.label);
      jv["probability"] = v.probability;
      variants.push_back(jv);
    }
    js["variants"] = variants;
    sentences.push_back(js);
  }
  return sentences;
}

}  // namespace

std::string predictions_jsonl(const std::vector<std::string>& ids,
                              const std::map<AttributeKind, std::vector<DescriptionPrediction>>& predictions,
                              bool trace) {
  const Vocabulary vocab;
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    nlohmann::ordered_json j;
    j["id"] = ids[i];
    for (const auto& [attribute, preds] : predictions) {
      const auto& p = preds.at(i);
      const auto& labels = vocab.lexicon(attribute).label_set();
      nlohmann::ordered_json a;
      a["label"] = labels.label(p.label);
      a["probability"] = p.probability;
      if (p.supporting_sentence) a["sentence"] = *p.supporting_sentence;
      if (trace) a["trace"] = trace_json(p, labels);
      j[std::string(to_string(attribute))] = a;
    }
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::string split_json(const CorpusSplit& split) {
  nlohmann::ordered_json j;
  j["seed"] = split.seed;
  j["ratio"] = split.ratio;
  j["train_ids"] = split.train_ids;
  j["test_ids"] = split.test_ids;
  return j.dump(2) + "\n";
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::uint64_t file_checksum(const std::filesystem::path& path) { return fnv1a(read_file(path)); }

void write_run_artifacts(const Pipeline& pipeline, const RunResult& result,
                         const std::vector<DescriptionRecord>& records, bool trace) {
  const auto& cfg = pipeline.config();
  const auto dir = cfg.out_dir;
  std::filesystem::create_directories(dir);
  std::vector<std::string> artifacts;
  auto emit = [&](const std::string& name, std::string_view contents) {
    write_file(dir / name, contents);
    artifacts.push_back(name);
  };

  emit("split.json", split_json(result.split));
  std::map<AttributeKind, std::vector<DescriptionPrediction>> by_attribute;
  for (const auto& run : result.runs) {
    const std::string attr(to_string(run.attribute));
    save_model(run.trained.model, dir / ("model_" + attr + ".bin"));
    artifacts.push_back("model_" + attr + ".bin");
    emit("train_report_" + attr + ".json", train_report_json(run.trained.report));
    emit("eval_" + attr + ".json", report_json(run.evaluation.report));
    emit("eval_" + attr + ".txt", format_report(run.evaluation.report));
    emit("confusion_" + attr + ".csv", confusion_csv(run.evaluation.report.matrix));
    emit("distribution_" + attr + ".txt", format_distribution(distribution(run.data.balanced), run.data.balanced.label_set));
    by_attribute[run.attribute] = run.evaluation.predictions;
  }
  std::vector<std::string> test_ids;
  for (const auto& r : records) {
    if (result.split.test_ids.count(r.id)) test_ids.push_back(r.id);
  }
  emit("predictions.jsonl", predictions_jsonl(test_ids, by_attribute, trace));

  std::vector<std::filesystem::path> inputs;
  if (!cfg.corpus.empty()) inputs.push_back(cfg.corpus);
  write_manifest(dir / "manifest.json", cfg, inputs, dir, artifacts);
}

void write_manifest(const std::filesystem::path& file, const PipelineConfig& config,
                    const std::vector<std::filesystem::path>& inputs, const std::filesystem::path& dir,
                    const std::vector<std::string>& artifacts) {
  nlohmann::ordered_json manifest;
  manifest["config_hash"] = hex64(config_hash(config));
  manifest["config"] = config_text(config);
  nlohmann::ordered_json seeds;
  seeds["split"] = config.split_seed;
  seeds["augment"] = config.provider_seed;
  seeds["balance"] = config.balance_seed;
  seeds["validation"] = config.validation_seed;
  seeds["init"] = config.hyper.init_seed;
  seeds["shuffle"] = config.hyper.shuffle_seed;
  seeds["embedding"] = config.embedding_seed;
  manifest["seeds"] = seeds;
  nlohmann::ordered_json in = nlohmann::ordered_json::object();
  for (const auto& p : inputs) {
    if (std::filesystem::exists(p)) in[p.string()] = hex64(file_checksum(p));
  }
  manifest["inputs"] = in;
  nlohmann::ordered_json sums = nlohmann::ordered_json::object();
  for (const auto& name : artifacts) sums[name] = hex64(file_checksum(dir / name));
  manifest["artifacts"] = sums;
  write_file(file, manifest.dump(2) + "\n");
}

}  // namespace ccv
