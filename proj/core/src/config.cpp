#include "ccv/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ccv/error.hpp"
#include "ccv/hash.hpp"
#include "ccv/text.hpp"

namespace ccv {

namespace {

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  auto v = text::trim(value);
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError("config key '" + std::string(key) + "': cannot parse '" + std::string(value) + "'");
  }
  return out;
}

double parse_double(std::string_view key, std::string_view value) {
  std::string v(text::trim(value));
  char* end = nullptr;
  double d = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size()) {
    throw ConfigError("config key '" + std::string(key) + "': cannot parse '" + std::string(value) + "' as a number");
  }
  return d;
}

bool parse_bool(std::string_view key, std::string_view value) {
  auto v = text::to_lower(text::trim(value));
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("config key '" + std::string(key) + "': expected a boolean, got '" + std::string(value) + "'");
}

std::string fmt_double(double d) {
  std::ostringstream s;
  s.precision(17);
  s << d;
  return s.str();
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "corpus",           "attributes",         "split.ratio",         "split.seed",        "split.stratified",
      "augment.chains",   "augment.provider",   "augment.endpoint",    "augment.cache",     "augment.seed",
      "balance.fraction", "balance.seed",       "validation.ratio",    "validation.seed",   "train.batch_size",
      "train.learning_rate", "train.beta1",     "train.beta2",         "train.epsilon",     "train.max_epochs",
      "train.patience",   "train.hidden1",      "train.hidden2",       "train.init_seed",   "train.shuffle_seed",
      "embed.backend",    "embed.dimension",    "embed.seed",          "embed.endpoint",    "tokenize",
      "out_dir",
  };
  return keys;
}

void PipelineConfig::set(std::string_view key, std::string_view raw) {
  const std::string value(text::trim(raw));
  auto u64 = [&] { return parse_number<std::uint64_t>(key, value); };
  auto size = [&] { return parse_number<std::size_t>(key, value); };
  if (key == "corpus") corpus = value;
  else if (key == "attributes") {
    attributes.clear();
    for (const auto& a : text::split(value, ',')) attributes.push_back(parse_attribute(text::trim(a)));
  }
  else if (key == "split.ratio") split_ratio = parse_double(key, value);
  else if (key == "split.seed") split_seed = u64();
  else if (key == "split.stratified") split_stratified = parse_bool(key, value);
  else if (key == "augment.chains") chains = value;
  else if (key == "augment.provider") provider = text::to_lower(value);
  else if (key == "augment.endpoint") provider_endpoint = value;
  else if (key == "augment.cache") translation_cache = value;
  else if (key == "augment.seed") provider_seed = u64();
  else if (key == "balance.fraction") balance_fraction = parse_double(key, value);
  else if (key == "balance.seed") balance_seed = u64();
  else if (key == "validation.ratio") validation_ratio = parse_double(key, value);
  else if (key == "validation.seed") validation_seed = u64();
  else if (key == "train.batch_size") hyper.batch_size = size();
  else if (key == "train.learning_rate") hyper.learning_rate = parse_double(key, value);
  else if (key == "train.beta1") hyper.beta1 = parse_double(key, value);
  else if (key == "train.beta2") hyper.beta2 = parse_double(key, value);
  else if (key == "train.epsilon") hyper.epsilon = parse_double(key, value);
  else if (key == "train.max_epochs") hyper.max_epochs = size();
  else if (key == "train.patience") hyper.patience = size();
  else if (key == "train.hidden1") hyper.hidden1 = size();
  else if (key == "train.hidden2") hyper.hidden2 = size();
  else if (key == "train.init_seed") hyper.init_seed = u64();
  else if (key == "train.shuffle_seed") hyper.shuffle_seed = u64();
  else if (key == "embed.backend") backend = text::to_lower(value);
  else if (key == "embed.dimension") embedding_dim = size();
  else if (key == "embed.seed") embedding_seed = u64();
  else if (key == "embed.endpoint") backend_endpoint = value;
  else if (key == "tokenize") tokenize = parse_bool(key, value);
  else if (key == "out_dir") out_dir = value;
  else throw ConfigError("unknown config key '" + std::string(key) + "'");
}

std::string PipelineConfig::get(std::string_view key) const {
  auto u = [](auto v) { return std::to_string(v); };
  auto b = [](bool v) { return std::string(v ? "true" : "false"); };
  if (key == "corpus") return corpus.string();
  if (key == "attributes") {
    std::vector<std::string> names;
    for (auto a : attributes) names.emplace_back(to_string(a));
    return text::join(names, ",");
  }
  if (key == "split.ratio") return fmt_double(split_ratio);
  if (key == "split.seed") return u(split_seed);
  if (key == "split.stratified") return b(split_stratified);
  if (key == "augment.chains") return chains;
  if (key == "augment.provider") return provider;
  if (key == "augment.endpoint") return provider_endpoint;
  if (key == "augment.cache") return translation_cache.string();
  if (key == "augment.seed") return u(provider_seed);
  if (key == "balance.fraction") return fmt_double(balance_fraction);
  if (key == "balance.seed") return u(balance_seed);
  if (key == "validation.ratio") return fmt_double(validation_ratio);
  if (key == "validation.seed") return u(validation_seed);
  if (key == "train.batch_size") return u(hyper.batch_size);
  if (key == "train.learning_rate") return fmt_double(hyper.learning_rate);
  if (key == "train.beta1") return fmt_double(hyper.beta1);
  if (key == "train.beta2") return fmt_double(hyper.beta2);
  if (key == "train.epsilon") return fmt_double(hyper.epsilon);
  if (key == "train.max_epochs") return u(hyper.max_epochs);
  if (key == "train.patience") return u(hyper.patience);
  if (key == "train.hidden1") return u(hyper.hidden1);
  if (key == "train.hidden2") return u(hyper.hidden2);
  if (key == "train.init_seed") return u(hyper.init_seed);
  if (key == "train.shuffle_seed") return u(hyper.shuffle_seed);
  if (key == "embed.backend") return backend;
  if (key == "embed.dimension") return u(embedding_dim);
  if (key == "embed.seed") return u(embedding_seed);
  if (key == "embed.endpoint") return backend_endpoint;
  if (key == "tokenize") return b(tokenize);
  if (key == "out_dir") return out_dir.string();
  throw ConfigError("unknown config key '" + std::string(key) + "'");
}

void PipelineConfig::validate() const {
  if (attributes.empty()) throw ConfigError("attributes: at least one attribute is required");
  if (!(split_ratio > 0.0 && split_ratio < 1.0)) throw ConfigError("split.ratio must lie in (0, 1)");
  if (!(validation_ratio > 0.0 && validation_ratio < 1.0)) throw ConfigError("validation.ratio must lie in (0, 1)");
  if (!(balance_fraction > 0.0 && balance_fraction <= 1.0)) throw ConfigError("balance.fraction must lie in (0, 1]");
  if (provider != "offline" && provider != "identity" && provider != "endpoint") {
    throw ConfigError("augment.provider must be offline, identity or endpoint, got '" + provider + "'");
  }
  if (provider == "endpoint" && provider_endpoint.empty()) {
    throw ConfigError("augment.endpoint is required when augment.provider = endpoint");
  }
  if (backend != "hashing" && backend != "endpoint") {
    throw ConfigError("embed.backend must be hashing or endpoint, got '" + backend + "'");
  }
  if (backend == "endpoint" && backend_endpoint.empty()) {
    throw ConfigError("embed.endpoint is required when embed.backend = endpoint");
  }
  if (embedding_dim == 0) throw ConfigError("embed.dimension must be positive");
  hyper.validate();
}

void PipelineConfig::override_seeds(std::uint64_t seed) {
  split_seed = combine_seed(seed, 1);
  provider_seed = combine_seed(seed, 2);
  balance_seed = combine_seed(seed, 3);
  validation_seed = combine_seed(seed, 4);
  hyper.init_seed = combine_seed(seed, 5);
  hyper.shuffle_seed = combine_seed(seed, 6);
  embedding_seed = combine_seed(seed, 7);
}

PipelineConfig parse_config(std::string_view contents, PipelineConfig base) {
  std::size_t lineno = 0;
  for (const auto& raw : text::split(contents, '\n')) {
    ++lineno;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = text::trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    base.set(text::trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return base;
}

PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

std::string env_name(std::string_view key) {
  std::string out = "CCV_";
  for (char c : key) out += c == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

void apply_environment(PipelineConfig& config,
                       const std::function<std::optional<std::string>(const std::string&)>& getenv_fn) {
  for (const auto& key : config_keys()) {
    if (auto v = getenv_fn(env_name(key))) config.set(key, *v);
  }
}

std::string config_text(const PipelineConfig& config) {
  std::string out;
  for (const auto& key : config_keys()) out += key + " = " + config.get(key) + "\n";
  return out;
}

std::uint64_t config_hash(const PipelineConfig& config) { return fnv1a(config_text(config)); }

}  // namespace ccv
