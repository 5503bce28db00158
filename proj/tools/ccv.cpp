// Command-line driver for the costume-core labeling pipeline.
//
//   ccv [--config FILE] [--set key=value ...] [--seed-override N]
//       [--provider offline|identity|endpoint] [--backend hashing|endpoint]
//       [--trace] [--out-dir DIR] <subcommand>
//
// Exit status: 0 success, 1 validation or configuration failure, 2 runtime error.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ccv/config.hpp"
#include "ccv/corpus.hpp"
#include "ccv/dataset.hpp"
#include "ccv/error.hpp"
#include "ccv/evaluation.hpp"
#include "ccv/model_io.hpp"
#include "ccv/pipeline.hpp"
#include "ccv/synth.hpp"
#include "ccv/text.hpp"

namespace fs = std::filesystem;

namespace {

struct GlobalFlags {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed_override;
  std::string provider;
  std::string backend;
  std::string out_dir;
  std::string corpus;
  bool trace = false;
};

ccv::PipelineConfig resolve_config(const GlobalFlags& flags) {
  ccv::PipelineConfig config;
  if (!flags.config_path.empty()) config = ccv::load_config(flags.config_path);
  ccv::apply_environment(config, [](const std::string& name) -> std::optional<std::string> {
    if (const char* v = std::getenv(name.c_str())) return std::string(v);
    return std::nullopt;
  });
  for (const auto& kv : flags.overrides) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw ccv::ConfigError("--set expects key=value, got '" + kv + "'");
    config.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (flags.seed_override) config.override_seeds(*flags.seed_override);
  if (!flags.provider.empty()) config.set("augment.provider", flags.provider);
  if (!flags.backend.empty()) config.set("embed.backend", flags.backend);
  if (!flags.out_dir.empty()) config.out_dir = flags.out_dir;
  if (!flags.corpus.empty()) config.corpus = flags.corpus;
  config.validate();
  return config;
}

std::string attr_name(ccv::AttributeKind kind) { return std::string(ccv::to_string(kind)); }

struct Artifacts {
  fs::path dir;
  std::vector<std::string> names;
  void write(const std::string& name, std::string_view contents) {
    ccv::write_file(dir / name, contents);
    names.push_back(name);
  }
};

void finish(const ccv::PipelineConfig& config, const std::string& command, const Artifacts& out) {
  std::vector<fs::path> inputs;
  if (!config.corpus.empty()) inputs.push_back(config.corpus);
  ccv::write_manifest(out.dir / ("manifest_" + command + ".json"), config, inputs, out.dir, out.names);
}

struct Sides {
  std::vector<ccv::DescriptionRecord> all, train, test;
  ccv::CorpusSplit split;
};

Sides load_and_split(ccv::Pipeline& pipeline) {
  Sides s;
  s.all = pipeline.load_corpus();
  s.split = pipeline.split(s.all);
  ccv::assert_disjoint(s.split.train_ids, s.split.test_ids, "corpus split");
  s.train = ccv::select(s.all, s.split.train_ids);
  s.test = ccv::select(s.all, s.split.test_ids);
  return s;
}

int cmd_validate(const ccv::PipelineConfig& config) {
  ccv::Pipeline pipeline(config);
  auto records = pipeline.load_corpus();
  std::map<std::string, std::size_t> colors, work_types;
  for (const auto& r : records) {
    ++colors[r.gold_color_group];
    ++work_types[r.gold_work_type];
  }
  std::cout << "ok: " << records.size() << " records, " << colors.size() << " color groups, " << work_types.size()
            << " work types\n";
  return 0;
}

int cmd_split(const ccv::PipelineConfig& config) {
  ccv::Pipeline pipeline(config);
  auto sides = load_and_split(pipeline);
  Artifacts out{config.out_dir, {}};
  fs::create_directories(out.dir);
  out.write("split.json", ccv::split_json(sides.split));
  out.write("train.jsonl", ccv::serialize_corpus(sides.train));
  out.write("test.jsonl", ccv::serialize_corpus(sides.test));
  finish(config, "split", out);
  std::cout << "split: " << sides.train.size() << " train / " << sides.test.size() << " test\n";
  return 0;
}

int cmd_augment(const ccv::PipelineConfig& config) {
  ccv::Pipeline pipeline(config);
  auto sides = load_and_split(pipeline);
  Artifacts out{config.out_dir, {}};
  fs::create_directories(out.dir);
  // Labels for both attributes are carried on every sample, so one pass suffices.
  auto train = pipeline.test_data(sides.train, ccv::AttributeKind::Color);
  auto test = pipeline.test_data(sides.test, ccv::AttributeKind::Color);
  ccv::assert_no_leakage(train, test);
  out.write("samples_train.jsonl", ccv::serialize_samples(train.samples));
  out.write("samples_test.jsonl", ccv::serialize_samples(test.samples));
  finish(config, "augment", out);
  std::cout << "augment: " << sides.train.size() << " descriptions -> " << train.size() << " train samples, "
            << sides.test.size() << " descriptions -> " << test.size() << " test samples\n";
  return 0;
}

int cmd_build(const ccv::PipelineConfig& config) {
  ccv::Pipeline pipeline(config);
  auto sides = load_and_split(pipeline);
  Artifacts out{config.out_dir, {}};
  fs::create_directories(out.dir);
  for (auto attribute : config.attributes) {
    auto data = pipeline.training_data(sides.train, attribute);
    const auto name = attr_name(attribute);
    out.write("dataset_" + name + "_train.jsonl", ccv::serialize_samples(data.train.samples));
    out.write("dataset_" + name + "_validation.jsonl", ccv::serialize_samples(data.validation.samples));
    std::cout << name << " (before balancing)\n"
              << ccv::format_distribution(ccv::distribution(data.full), data.full.label_set) << '\n'
              << name << " (after balancing, fraction " << config.balance_fraction << ")\n"
              << ccv::format_distribution(ccv::distribution(data.balanced), data.balanced.label_set) << '\n';
  }
  finish(config, "build", out);
  return 0;
}

int cmd_train(const ccv::PipelineConfig& config) {
  ccv::Pipeline pipeline(config);
  auto sides = load_and_split(pipeline);
  Artifacts out{config.out_dir, {}};
  fs::create_directories(out.dir);
  out.write("split.json", ccv::split_json(sides.split));
  for (auto attribute : config.attributes) {
    auto data = pipeline.training_data(sides.train, attribute);
    ccv::assert_no_leakage(data.full, pipeline.test_data(sides.test, attribute));
    auto trained = pipeline.train(data);
    const auto name = attr_name(attribute);
    ccv::save_model(trained.model, out.dir / ("model_" + name + ".bin"));
    out.names.push_back("model_" + name + ".bin");
    out.write("train_report_" + name + ".json", ccv::train_report_json(trained.report));
    const auto& last = trained.report.epochs.back();
    std::cout << name << ": " << trained.report.stopped_epoch << " epochs (best " << trained.report.best_epoch
              << "), train acc " << last.train_accuracy << ", val acc " << last.validation_accuracy << '\n';
  }
  finish(config, "train", out);
  return 0;
}

std::map<ccv::AttributeKind, ccv::MlpClassifier> load_models(const ccv::PipelineConfig& config) {
  std::map<ccv::AttributeKind, ccv::MlpClassifier> models;
  for (auto attribute : config.attributes) {
    auto path = config.out_dir / ("model_" + attr_name(attribute) + ".bin");
    if (!fs::exists(path)) throw ccv::ConfigError("no trained model at " + path.string() + " (run `ccv train` first)");
    models.emplace(attribute, ccv::load_model(path));
  }
  return models;
}

int cmd_evaluate(const ccv::PipelineConfig& config, bool trace) {
  ccv::Pipeline pipeline(config);
  auto sides = load_and_split(pipeline);
  auto models = load_models(config);
  Artifacts out{config.out_dir, {}};
  std::map<ccv::AttributeKind, std::vector<ccv::DescriptionPrediction>> predictions;
  for (const auto& [attribute, model] : models) {
    auto ev = pipeline.evaluate(model, sides.test);
    const auto name = attr_name(attribute);
    out.write("eval_" + name + ".json", ccv::report_json(ev.report));
    out.write("eval_" + name + ".txt", ccv::format_report(ev.report));
    out.write("confusion_" + name + ".csv", ccv::confusion_csv(ev.report.matrix));
    std::cout << ccv::format_report(ev.report) << '\n';
    predictions[attribute] = std::move(ev.predictions);
  }
  std::vector<std::string> ids;
  for (const auto& r : sides.test) ids.push_back(r.id);
  out.write("test_predictions.jsonl", ccv::predictions_jsonl(ids, predictions, trace));
  finish(config, "evaluate", out);
  return 0;
}

int cmd_predict(const ccv::PipelineConfig& config, bool trace, const std::string& input, const std::string& text) {
  ccv::Pipeline pipeline(config);
  auto models = load_models(config);
  std::vector<ccv::DescriptionRecord> records;
  if (!text.empty()) {
    records.push_back({"input", text, "", "", ""});
  } else {
    const fs::path path = input.empty() ? config.corpus : fs::path(input);
    // Unlabeled input: gold fields are optional here, so parse without validation.
    for (const auto& line : ccv::text_lines(ccv::read_file(path))) {
      auto obj = nlohmann::json::parse(line);
      records.push_back({obj.at("id").template get<std::string>(), obj.at("text").template get<std::string>(), "", "", ""});
    }
  }
  std::map<ccv::AttributeKind, std::vector<ccv::DescriptionPrediction>> predictions;
  std::vector<std::string> ids;
  for (const auto& r : records) ids.push_back(r.id);
  for (const auto& [attribute, model] : models) {
    for (const auto& r : records) predictions[attribute].push_back(pipeline.predict(model, r));
  }
  const auto jsonl = ccv::predictions_jsonl(ids, predictions, trace);
  if (!text.empty()) {
    std::cout << jsonl;
    return 0;
  }
  Artifacts out{config.out_dir, {}};
  fs::create_directories(out.dir);
  out.write("predictions.jsonl", jsonl);
  finish(config, "predict", out);
  std::cout << "predict: " << records.size() << " descriptions -> " << (out.dir / "predictions.jsonl").string() << '\n';
  return 0;
}

int cmd_report(const ccv::PipelineConfig& config) {
  bool any = false;
  for (auto attribute : config.attributes) {
    auto path = config.out_dir / ("eval_" + attr_name(attribute) + ".json");
    if (!fs::exists(path)) continue;
    std::cout << ccv::format_report(ccv::parse_report(ccv::read_file(path))) << '\n';
    any = true;
  }
  if (!any) throw ccv::ConfigError("no evaluation reports in " + config.out_dir.string() + " (run `ccv evaluate` first)");
  return 0;
}

int cmd_synth(std::size_t descriptions, std::uint64_t seed, const std::string& output) {
  ccv::SynthOptions options;
  options.descriptions = descriptions;
  options.seed = seed;
  ccv::Vocabulary vocab;
  auto records = ccv::synthesize_corpus(options, vocab);
  const auto jsonl = ccv::serialize_corpus(records);
  if (output.empty() || output == "-") {
    std::cout << jsonl;
  } else {
    ccv::write_file(output, jsonl);
    std::cerr << "synth: " << records.size() << " records -> " << output << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Map free-form garment descriptions to controlled-vocabulary labels"};
  app.require_subcommand(1);
  GlobalFlags flags;
  app.add_option("--config", flags.config_path, "Configuration file (key = value lines)");
  app.add_option("--set", flags.overrides, "Override a configuration key (key=value); repeatable");
  app.add_option("--seed-override", flags.seed_override, "Derive every seed from this value");
  app.add_option("--provider", flags.provider, "Translation provider")->check(CLI::IsMember({"offline", "identity", "endpoint"}));
  app.add_option("--backend", flags.backend, "Embedding backend")->check(CLI::IsMember({"hashing", "endpoint"}));
  app.add_option("--out-dir", flags.out_dir, "Output directory");
  app.add_option("--corpus", flags.corpus, "Corpus file (overrides the configured path)");
  app.add_flag("--trace", flags.trace, "Include the per-sentence and per-variant trace in predictions");

  auto* validate = app.add_subcommand("validate", "Load and validate the corpus");
  auto* split = app.add_subcommand("split", "Write the description-level train/test split");
  auto* augment = app.add_subcommand("augment", "Tokenize, annotate and back-translate both sides");
  auto* build = app.add_subcommand("build", "Build balanced training datasets and print class distributions");
  auto* train = app.add_subcommand("train", "Train one classifier per attribute");
  auto* evaluate = app.add_subcommand("evaluate", "Evaluate trained models on the held-out descriptions");
  auto* predict = app.add_subcommand("predict", "Label unseen descriptions");
  std::string predict_input, predict_text;
  predict->add_option("--input", predict_input, "Line-delimited records with id and text");
  predict->add_option("--text", predict_text, "Label a single description and print the result");
  auto* report = app.add_subcommand("report", "Print stored evaluation reports as tables");
  auto* synth = app.add_subcommand("synth", "Generate a synthetic labeled corpus");
  std::size_t synth_count = 400;
  std::uint64_t synth_seed = 7;
  std::string synth_output;
  synth->add_option("--descriptions", synth_count, "Number of records")->check(CLI::PositiveNumber);
  synth->add_option("--seed", synth_seed, "Generator seed");
  synth->add_option("--output,-o", synth_output, "Output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) return cmd_synth(synth_count, synth_seed, synth_output);
    const auto config = resolve_config(flags);
    if (validate->parsed()) return cmd_validate(config);
    if (split->parsed()) return cmd_split(config);
    if (augment->parsed()) return cmd_augment(config);
    if (build->parsed()) return cmd_build(config);
    if (train->parsed()) return cmd_train(config);
    if (evaluate->parsed()) return cmd_evaluate(config, flags.trace);
    if (predict->parsed()) return cmd_predict(config, flags.trace, predict_input, predict_text);
    if (report->parsed()) return cmd_report(config);
  } catch (const ccv::ValidationFailure& e) {
    std::cerr << "ccv: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "ccv: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
