#include "ccv/model_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "ccv/error.hpp"
#include "ccv/hash.hpp"

namespace ccv {

namespace {

constexpr char kMagic[8] = {'C', 'C', 'V', 'M', 'O', 'D', 'E', 'L'};

class Writer {
 public:
  void raw(const void* p, std::size_t n) {
    auto b = static_cast<const std::byte*>(p);
    buf_.insert(buf_.end(), b, b + n);
  }
  template <typename T>
  void le(T v) {
    using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
    U u = std::bit_cast<U>(v);
    for (std::size_t i = 0; i < sizeof(U); ++i) buf_.push_back(static_cast<std::byte>((u >> (8 * i)) & 0xff));
  }
  void str(const std::string& s) {
    le(static_cast<std::uint32_t>(s.size()));
    raw(s.data(), s.size());
  }
  std::vector<std::byte>& bytes() { return buf_; }

 private:
  std::vector<std::byte> buf_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::byte> b) : b_(b) {}
  std::span<const std::byte> take(std::size_t n) {
    if (n > b_.size() - pos_) throw CorruptFile("model file is truncated");
    auto s = b_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  template <typename U>
  U le() {
    auto s = take(sizeof(U));
    U u = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) u |= static_cast<U>(std::to_integer<std::uint64_t>(s[i])) << (8 * i);
    return u;
  }
  double f64() { return std::bit_cast<double>(le<std::uint64_t>()); }
  std::string str() {
    auto n = le<std::uint32_t>();
    auto s = take(n);
    return std::string(reinterpret_cast<const char*>(s.data()), s.size());
  }
  std::size_t pos() const noexcept { return pos_; }
  bool done() const noexcept { return pos_ == b_.size(); }

 private:
  std::span<const std::byte> b_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::byte> encode_model(const MlpClassifier& model) {
  Writer w;
  w.raw(kMagic, sizeof kMagic);
  w.le(kModelFormatVersion);
  w.le(static_cast<std::uint32_t>(model.labels().attribute() == AttributeKind::Color ? 0 : 1));
  w.le(static_cast<std::uint64_t>(model.input_dim()));
  const auto dims = model.dims();
  w.le(static_cast<std::uint32_t>(dims.size()));
  for (auto d : dims) w.le(static_cast<std::uint64_t>(d));
  w.le(static_cast<std::uint32_t>(model.labels().size()));
  for (const auto& c : model.labels().classes()) w.str(c);
  w.le(static_cast<std::uint32_t>(model.labels().sentinel_index()));
  w.str(model.backend_name());
  const std::size_t checksum_at = w.bytes().size();
  w.le(std::uint64_t{0});
  for (const auto& layer : model.layers()) {
    for (double v : layer.weight) w.le(v);
    for (double v : layer.bias) w.le(v);
  }
  auto& bytes = w.bytes();
  std::uint64_t h = fnv1a_bytes(std::span(bytes).first(checksum_at));
  h = fnv1a_bytes(std::span(bytes).subspan(checksum_at + 8), h);
  for (std::size_t i = 0; i < 8; ++i) bytes[checksum_at + i] = static_cast<std::byte>((h >> (8 * i)) & 0xff);
  return std::move(bytes);
}

MlpClassifier decode_model(std::span<const std::byte> bytes) {
  Reader r(bytes);
  auto magic = r.take(sizeof kMagic);
  if (std::memcmp(magic.data(), kMagic, sizeof kMagic) != 0) throw CorruptFile("not a model file (bad magic)");
  const auto version = r.le<std::uint32_t>();
  if (version != kModelFormatVersion) {
    throw FormatVersionMismatch("model file format version " + std::to_string(version) +
                                " is not supported; this build reads version " + std::to_string(kModelFormatVersion));
  }
  const auto attribute = r.le<std::uint32_t>();
  if (attribute > 1) throw CorruptFile("bad attribute tag");
  const auto m = r.le<std::uint64_t>();
  const auto ndims = r.le<std::uint32_t>();
  if (ndims != 4) throw CorruptFile("expected 4 layer dimensions, found " + std::to_string(ndims));
  std::vector<std::size_t> dims;
  for (std::uint32_t i = 0; i < ndims; ++i) dims.push_back(static_cast<std::size_t>(r.le<std::uint64_t>()));
  if (dims[0] != m) throw CorruptFile("embedding dimension disagrees with layer dimensions");
  for (auto d : dims) {
    if (d == 0 || d > (std::size_t{1} << 24)) throw CorruptFile("implausible layer dimension");
  }
  const auto nclasses = r.le<std::uint32_t>();
  if (nclasses > (1u << 16)) throw CorruptFile("implausible class count");
  std::vector<std::string> classes;
  for (std::uint32_t i = 0; i < nclasses; ++i) classes.push_back(r.str());
  const auto sentinel = r.le<std::uint32_t>();
  if (sentinel >= classes.size()) throw CorruptFile("sentinel index out of range");
  auto backend = r.str();
  const std::size_t checksum_at = r.pos();
  const auto stored = r.le<std::uint64_t>();

  std::vector<DenseLayer> layers;
  for (std::size_t l = 0; l < 3; ++l) {
    DenseLayer layer(dims[l], dims[l + 1]);
    for (double& v : layer.weight) v = r.f64();
    for (double& v : layer.bias) v = r.f64();
    layers.push_back(std::move(layer));
  }
  if (!r.done()) throw CorruptFile("trailing bytes after weights");
  std::uint64_t h = fnv1a_bytes(bytes.first(checksum_at));
  h = fnv1a_bytes(bytes.subspan(checksum_at + 8), h);
  if (h != stored) throw CorruptFile("checksum mismatch");

  try {
    const std::string sentinel_label = classes[sentinel];
    LabelSet labels(attribute == 0 ? AttributeKind::Color : AttributeKind::WorkType, std::move(classes),
                    sentinel_label);
    return make_classifier(std::move(layers), std::move(labels), std::move(backend));
  } catch (const ValidationError& e) {
    throw CorruptFile(std::string("invalid label set: ") + e.what());
  } catch (const DimensionMismatch& e) {
    throw CorruptFile(std::string("inconsistent layers: ") + e.what());
  }
}

void save_model(const MlpClassifier& model, const std::filesystem::path& path) {
  const auto bytes = encode_model(model);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write model file " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

MlpClassifier load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model file " + path.string());
  std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_model(std::as_bytes(std::span(raw)));
}

}  // namespace ccv
