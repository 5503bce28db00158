#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ccv/mlp.hpp"

namespace ccv {

inline constexpr std::uint32_t kModelFormatVersion = 1;

// Binary model container, all integers and floats little-endian:
//
//   magic "CCVMODEL"
//   u32 format version
//   u32 attribute (0 color, 1 work type)
//   u64 embedding dimension m
//   u32 layer-dimension count, then that many u64 dims (m, h1, h2, c)
//   u32 class count, then per class u32 byte length + UTF-8 bytes
//   u32 sentinel index
//   u32 backend-name length + bytes
//   u64 FNV-1a checksum of every header byte above plus every weight byte
//   f64 weights then biases, layer by layer, row-major
std::vector<std::byte> encode_model(const MlpClassifier& model);
// Throws FormatVersionMismatch or CorruptFile.
MlpClassifier decode_model(std::span<const std::byte> bytes);

void save_model(const MlpClassifier& model, const std::filesystem::path& path);
MlpClassifier load_model(const std::filesystem::path& path);

}  // namespace ccv
