#include "ccv/embedding.hpp"

#include <cmath>

#include <httplib.h>
#include <json.hpp>

#include "ccv/error.hpp"
#include "ccv/hash.hpp"
#include "ccv/text.hpp"

namespace ccv {

HashingEmbedder::HashingEmbedder(std::size_t dimension, std::uint64_t seed) : dimension_(dimension), seed_(seed) {
  if (dimension_ == 0) throw ConfigError("embedding dimension must be positive");
}

Vector HashingEmbedder::embed(std::string_view input) {
  Vector v(dimension_, 0.0);
  const auto body = text::trim(input);
  if (body.empty()) return v;
  const auto salt = mix64(seed_);
  // Unigrams land in three signed buckets, so one collision leaves two words
  // distinguishable; the far more numerous bigrams take one bucket at half
  // weight to keep their collision noise off the unigram signal.
  auto add = [&](std::string_view feature, int n, double w) {
    const auto h = fnv1a(feature, kFnvOffset ^ salt);
    for (std::uint64_t k = 0; k < static_cast<std::uint64_t>(n); ++k) {
      const auto r = mix64(h + k);
      v[(r >> 1) % dimension_] += (r & 1) ? w : -w;
    }
  };

  const auto words = text::words(text::to_lower(body));
  if (words.empty()) {
    add(body, 3, 1.0);
  } else {
    for (std::size_t i = 0; i < words.size(); ++i) {
      add(words[i], 3, 1.0);
      if (i + 1 < words.size()) add(words[i] + ' ' + words[i + 1], 1, 0.5);
    }
  }
  double norm = 0.0;
  for (double x : v) norm += x * x;
  if (norm == 0.0) return v;
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  return v;
}

HttpEmbedder::HttpEmbedder(std::string url, std::size_t dimension, std::chrono::milliseconds timeout)
    : url_(std::move(url)), dimension_(dimension), timeout_(timeout) {
  if (url_.find("://") == std::string::npos) throw ConfigError("embedding endpoint must be an absolute URL: " + url_);
}

Vector HttpEmbedder::embed(std::string_view text) {
  auto scheme = url_.find("://");
  auto slash = url_.find('/', scheme + 3);
  httplib::Client client(url_.substr(0, slash));
  auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
  client.set_connection_timeout(secs.count());
  client.set_read_timeout(secs.count());
  nlohmann::json body = {{"text", text}};
  auto res = client.Post(slash == std::string::npos ? "/" : url_.substr(slash), body.dump(), "application/json");
  if (!res) throw BackendUnavailable("embedding endpoint " + url_ + ": " + httplib::to_string(res.error()));
  if (res->status != 200) {
    throw BackendUnavailable("embedding endpoint " + url_ + " returned HTTP " + std::to_string(res->status));
  }
  try {
    return nlohmann::json::parse(res->body).at("embedding").get<Vector>();
  } catch (const nlohmann::json::exception& e) {
    throw BackendUnavailable("embedding endpoint " + url_ + " sent a malformed body: " + e.what());
  }
}

Vector embed(EmbeddingBackend& backend, std::string_view text) {
  auto v = backend.embed(text);
  if (v.size() != backend.dimension()) {
    throw DimensionMismatch(backend.name() + " returned " + std::to_string(v.size()) + " values, expected " +
                            std::to_string(backend.dimension()));
  }
  return v;
}

}  // namespace ccv
