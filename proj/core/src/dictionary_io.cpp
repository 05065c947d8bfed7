// Binary dictionary format, little-endian throughout:
//
//   "DRVK" | u16 version (=1)
//   header: u32 n_w, n_per_period, n_grid, n_r, q, d_max, n_samples, folds
//           f64 tol | f64[q] noise table | f64[n_r] design grid
//           u64 seed | u32 n_alphas | f64[n_alphas] alphas
//   records sorted by (j, l, d):
//           u16 j, l, d | u16 rank r | f64 U[n_w*r] | f64 S[r] | f64 V[n_w*r]
//           u32 crc32 of the record bytes above
//   u32 crc32 of every preceding byte
//
// U and V are stored column-major.
#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "derivkit/dictionary.hpp"
#include "derivkit/errors.hpp"

namespace derivkit {

namespace {

constexpr char kMagic[4] = {'D', 'R', 'V', 'K'};
constexpr std::uint16_t kVersion = 1;

std::uint32_t crc32_of(std::span<const std::uint8_t> bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed in chunks for very large buffers.
  std::size_t offset = 0;
  while (offset < bytes.size()) {
    const std::size_t chunk = std::min<std::size_t>(bytes.size() - offset, 1u << 30);
    crc = crc32(crc, bytes.data() + offset, static_cast<uInt>(chunk));
    offset += chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

class ByteWriter {
 public:
  void raw(const void* data, std::size_t size) {
    const auto* p = static_cast<const std::uint8_t*>(data);
    bytes_.insert(bytes_.end(), p, p + size);
  }
  template <typename T>
  void uint(T value) {
    for (std::size_t i = 0; i < sizeof(T); ++i) bytes_.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
  }
  void u16(std::size_t value) { uint(static_cast<std::uint16_t>(value)); }
  void u32(std::size_t value) { uint(static_cast<std::uint32_t>(value)); }
  void f64(double value) { uint(std::bit_cast<std::uint64_t>(value)); }
  void f64s(const double* values, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) f64(values[i]);
  }
  std::size_t size() const { return bytes_.size(); }
  std::span<const std::uint8_t> since(std::size_t offset) const {
    return std::span<const std::uint8_t>(bytes_).subspan(offset);
  }
  std::vector<std::uint8_t> take() { return std::move(bytes_); }

 private:
  std::vector<std::uint8_t> bytes_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::span<const std::uint8_t> take(std::size_t size) {
    if (size > bytes_.size() - pos_) throw TruncatedFileError("dictionary file is truncated");
    auto out = bytes_.subspan(pos_, size);
    pos_ += size;
    return out;
  }
  template <typename T>
  T uint() {
    const auto b = take(sizeof(T));
    T value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(static_cast<T>(b[i]) << (8 * i));
    return value;
  }
  std::uint16_t u16() { return uint<std::uint16_t>(); }
  std::uint32_t u32() { return uint<std::uint32_t>(); }
  double f64() { return std::bit_cast<double>(uint<std::uint64_t>()); }
  void f64s(double* out, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) out[i] = f64();
  }
  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }
  std::span<const std::uint8_t> range(std::size_t begin, std::size_t end) const {
    return bytes_.subspan(begin, end - begin);
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

int checked_int(std::uint32_t value, const char* what) {
  if (value > 1u << 24) throw FormatError(std::string("implausible header value for ") + what);
  return static_cast<int>(value);
}

}  // namespace

std::vector<std::uint8_t> ModelDictionary::serialize() const {
  ByteWriter w;
  w.raw(kMagic, sizeof(kMagic));
  w.u16(kVersion);
  for (int value : {config_.n_w, config_.n_per_period, config_.n_grid, config_.n_r, config_.q(), config_.d_max,
                    config_.n_samples, config_.folds}) {
    w.u32(static_cast<std::size_t>(value));
  }
  w.f64(config_.tol);
  w.f64s(config_.noise_levels.data(), config_.noise_levels.size());
  w.f64s(space_.design.values.data(), space_.design.values.size());
  w.uint(seed_);
  w.u32(config_.alphas.size());
  w.f64s(config_.alphas.data(), config_.alphas.size());

  for (DictKey key : keys()) {
    const CompressedMap& entry = at(key);
    const std::size_t start = w.size();
    w.u16(static_cast<std::size_t>(key.j));
    w.u16(static_cast<std::size_t>(key.l));
    w.u16(static_cast<std::size_t>(key.d));
    w.u16(static_cast<std::size_t>(entry.rank()));
    w.f64s(entry.u.data(), static_cast<std::size_t>(entry.u.size()));
    w.f64s(entry.s.data(), static_cast<std::size_t>(entry.s.size()));
    w.f64s(entry.v.data(), static_cast<std::size_t>(entry.v.size()));
    w.u32(crc32_of(w.since(start)));
  }
  w.u32(crc32_of(w.since(0)));
  return w.take();
}

ModelDictionary ModelDictionary::deserialize(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  const auto magic = r.take(sizeof(kMagic));
  if (std::memcmp(magic.data(), kMagic, sizeof(kMagic)) != 0) throw BadMagicError("not a derivkit dictionary");
  const std::uint16_t version = r.u16();
  if (version != kVersion) {
    throw VersionMismatchError("unsupported dictionary version " + std::to_string(version));
  }

  DictionaryConfig config;
  config.n_w = checked_int(r.u32(), "n_w");
  config.n_per_period = checked_int(r.u32(), "n_per_period");
  config.n_grid = checked_int(r.u32(), "n_grid");
  config.n_r = checked_int(r.u32(), "n_r");
  const int q = checked_int(r.u32(), "q");
  config.d_max = checked_int(r.u32(), "d_max");
  config.n_samples = checked_int(r.u32(), "n_samples");
  config.folds = checked_int(r.u32(), "folds");
  config.tol = r.f64();
  config.noise_levels.resize(static_cast<std::size_t>(q));
  r.f64s(config.noise_levels.data(), config.noise_levels.size());
  std::vector<double> design(static_cast<std::size_t>(config.n_r));
  r.f64s(design.data(), design.size());
  const auto seed = r.uint<std::uint64_t>();
  config.alphas.resize(static_cast<std::size_t>(checked_int(r.u32(), "n_alphas")));
  r.f64s(config.alphas.data(), config.alphas.size());

  try {
    config.validate();
  } catch (const ArgumentError& e) {
    throw FormatError(std::string("invalid dictionary header: ") + e.what());
  }

  const Eigen::Index n_w = config.n_w;
  std::vector<CompressedMap> entries;
  const std::size_t expected = static_cast<std::size_t>(config.n_r) * static_cast<std::size_t>(q) *
                               static_cast<std::size_t>(config.d_max + 1);
  entries.reserve(expected);
  for (int j = 1; j <= config.n_r; ++j) {
    for (int l = 1; l <= q; ++l) {
      for (int d = 0; d <= config.d_max; ++d) {
        const std::size_t start = r.pos();
        const int rj = r.u16();
        const int rl = r.u16();
        const int rd = r.u16();
        const Eigen::Index rank = r.u16();
        if (rank > n_w) throw FormatError("record rank exceeds the window length");
        CompressedMap entry;
        entry.u.resize(n_w, rank);
        entry.s.resize(rank);
        entry.v.resize(n_w, rank);
        r.f64s(entry.u.data(), static_cast<std::size_t>(entry.u.size()));
        r.f64s(entry.s.data(), static_cast<std::size_t>(entry.s.size()));
        r.f64s(entry.v.data(), static_cast<std::size_t>(entry.v.size()));
        const std::size_t end = r.pos();
        if (r.u32() != crc32_of(r.range(start, end))) {
          throw ChecksumError("record checksum mismatch at (j=" + std::to_string(j) + ", l=" + std::to_string(l) +
                              ", d=" + std::to_string(d) + ")");
        }
        if (rj != j || rl != l || rd != d) throw FormatError("dictionary records are out of order");
        entries.push_back(std::move(entry));
      }
    }
  }

  const std::size_t body_end = r.pos();
  if (r.u32() != crc32_of(r.range(0, body_end))) throw ChecksumError("file checksum mismatch");
  if (r.remaining() != 0) throw FormatError("trailing bytes after dictionary trailer");

  ModelDictionary dict(std::move(config), seed, std::move(entries));
  dict.space_.design.values = std::move(design);
  return dict;
}

void ModelDictionary::save(const std::filesystem::path& path) const {
  const std::vector<std::uint8_t> bytes = serialize();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

ModelDictionary ModelDictionary::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("failed reading " + path.string());
  return deserialize(bytes);
}

}  // namespace derivkit
