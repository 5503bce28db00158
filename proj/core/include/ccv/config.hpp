#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ccv/train.hpp"
#include "ccv/vocabulary.hpp"

namespace ccv {

// Every knob of an end-to-end run. Stored on disk as flat "key = value"
// lines; see config_keys() for the names. No field defaults to anything
// time-dependent.
struct PipelineConfig {
  std::filesystem::path corpus;
  std::vector<AttributeKind> attributes{AttributeKind::Color, AttributeKind::WorkType};

  double split_ratio = 0.8;
  std::uint64_t split_seed = 1;
  bool split_stratified = false;

  std::string chains = "fr,de,es";
  std::string provider = "offline";  // offline, identity or endpoint
  std::string provider_endpoint;
  std::filesystem::path translation_cache;  // empty keeps the cache in memory
  std::uint64_t provider_seed = 0;

  double balance_fraction = 0.15;
  std::uint64_t balance_seed = 2;

  double validation_ratio = 0.8;
  std::uint64_t validation_seed = 3;

  Hyperparams hyper;

  std::string backend = "hashing";  // hashing or endpoint
  std::size_t embedding_dim = 512;
  std::uint64_t embedding_seed = 0;
  std::string backend_endpoint;

  bool tokenize = true;
  std::filesystem::path out_dir = "out";

  // Throws ConfigError naming the key for unknown keys or bad values.
  void set(std::string_view key, std::string_view value);
  std::string get(std::string_view key) const;
  void validate() const;
  // Replaces every seed with one derived from `seed`.
  void override_seeds(std::uint64_t seed);
};

const std::vector<std::string>& config_keys();

// Parses "key = value" lines on top of `base`. '#' starts a comment.
PipelineConfig parse_config(std::string_view text, PipelineConfig base = {});
PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base = {});
// Applies CCV_<KEY> variables (dots become underscores, upper case).
void apply_environment(PipelineConfig& config,
                       const std::function<std::optional<std::string>(const std::string&)>& getenv_fn);
std::string env_name(std::string_view key);

// Canonical text form; parse_config(config_text(c)) reproduces c.
std::string config_text(const PipelineConfig& config);
std::uint64_t config_hash(const PipelineConfig& config);

}  // namespace ccv
