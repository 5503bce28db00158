#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ccv {

using Vector = std::vector<double>;

// Maps text to a fixed-length real vector.
class EmbeddingBackend {
 public:
  virtual ~EmbeddingBackend() = default;
  virtual std::string name() const = 0;
  virtual std::size_t dimension() const = 0;
  virtual Vector embed(std::string_view text) = 0;
};

// Signed feature hashing, L2-normalized: word unigrams in three buckets,
// bigrams in one bucket at half weight. Text without any word characters hashes as a single
// opaque feature. Empty or all-whitespace text maps to the zero vector, as
// does the (vanishingly rare) input whose signed counts cancel exactly.
class HashingEmbedder final : public EmbeddingBackend {
 public:
  explicit HashingEmbedder(std::size_t dimension = 512, std::uint64_t seed = 0);
  std::string name() const override { return "hashing"; }
  std::size_t dimension() const override { return dimension_; }
  Vector embed(std::string_view text) override;

 private:
  std::size_t dimension_;
  std::uint64_t seed_;
};

// Remote sentence encoder: POST {"text"} -> {"embedding": [...]}.
class HttpEmbedder final : public EmbeddingBackend {
 public:
  HttpEmbedder(std::string url, std::size_t dimension, std::chrono::milliseconds timeout = std::chrono::seconds(10));
  std::string name() const override { return "endpoint"; }
  std::size_t dimension() const override { return dimension_; }
  Vector embed(std::string_view text) override;

 private:
  std::string url_;
  std::size_t dimension_;
  std::chrono::milliseconds timeout_;
};

// Calls the backend and checks the returned dimension (DimensionMismatch).
Vector embed(EmbeddingBackend& backend, std::string_view text);

}  // namespace ccv
