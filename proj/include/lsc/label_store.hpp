#ifndef LSC_LABEL_STORE_HPP
#define LSC_LABEL_STORE_HPP

// Binary persistence, all integers little-endian.
//
// Label map (.lscd):
//   "LSCD" | u8 version=1 | u16 n | u8 m | u8 k | u64 entry_count
//   entry_count x { (m+k) x u16 index (maxes then mins) | u64 label }
//   Entries are written in ascending packed-key order.
//
// Embeddings (.lsce):
//   "LSCE" | u8 version=1 | u16 n | u64 row_count | u8 dtype (1 = f32)
//   row_count x n x f32, row-major.

#include <array>
#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "lsc/closest_center.hpp"
#include "lsc/label_map.hpp"

namespace lsc {

inline constexpr std::array<char, 4> kMapMagic{'L', 'S', 'C', 'D'};
inline constexpr std::array<char, 4> kEmbeddingMagic{'L', 'S', 'C', 'E'};
inline constexpr std::uint8_t kStoreVersion = 1;
inline constexpr std::uint8_t kDtypeF32 = 1;
inline constexpr std::size_t kMapHeaderBytes = 4 + 1 + 2 + 1 + 1 + 8;
inline constexpr std::size_t kEmbeddingHeaderBytes = 4 + 1 + 2 + 8 + 1;

namespace detail {

class LeWriter {
 public:
  explicit LeWriter(std::ostream& os) : os_(os) {}

  void bytes(const char* p, std::size_t n) { os_.write(p, static_cast<std::streamsize>(n)); }
  void u8(std::uint8_t v) { put(v, 1); }
  void u16(std::uint16_t v) { put(v, 2); }
  void u32(std::uint32_t v) { put(v, 4); }
  void u64(std::uint64_t v) { put(v, 8); }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }

  void check() const {
    if (!os_) throw Error("write to output stream failed");
  }

 private:
  void put(std::uint64_t v, int width) {
    char buf[8];
    for (int i = 0; i < width; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    os_.write(buf, width);
  }
  std::ostream& os_;
};

class LeReader {
 public:
  explicit LeReader(std::istream& is) : is_(is) {}

  void bytes(char* p, std::size_t n, const char* what) {
    is_.read(p, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(is_.gcount()) != n) throw LoadError(LoadErrorKind::kTruncated, what);
  }
  std::uint8_t u8(const char* what) { return static_cast<std::uint8_t>(get(1, what)); }
  std::uint16_t u16(const char* what) { return static_cast<std::uint16_t>(get(2, what)); }
  std::uint32_t u32(const char* what) { return static_cast<std::uint32_t>(get(4, what)); }
  std::uint64_t u64(const char* what) { return get(8, what); }
  float f32(const char* what) { return std::bit_cast<float>(u32(what)); }

  bool at_end() { return is_.peek() == std::char_traits<char>::eof(); }

 private:
  std::uint64_t get(int width, const char* what) {
    unsigned char buf[8];
    bytes(reinterpret_cast<char*>(buf), static_cast<std::size_t>(width), what);
    std::uint64_t v = 0;
    for (int i = width; i-- > 0;) v = (v << 8) | buf[i];
    return v;
  }
  std::istream& is_;
};

inline void expect_magic(LeReader& r, const std::array<char, 4>& magic) {
  std::array<char, 4> got{};
  r.bytes(got.data(), got.size(), "magic");
  if (got != magic)
    throw LoadError(LoadErrorKind::kBadMagic, "expected '" + std::string(magic.begin(), magic.end()) + "'");
}

inline void expect_version(LeReader& r) {
  const auto v = r.u8("version");
  if (v != kStoreVersion) throw LoadError(LoadErrorKind::kBadVersion, "version " + std::to_string(v));
}

inline std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError(LoadErrorKind::kIo, "cannot open " + path);
  return in;
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path + " for writing");
  return out;
}

}  // namespace detail

inline void save_map(const LabelMap& map, std::ostream& os) {
  const SystemParams& p = map.params();
  if (p.n > 0xFFFF || p.m > 0xFF || p.k > 0xFF) throw ParameterError("params exceed the store field widths");
  detail::LeWriter w(os);
  w.bytes(kMapMagic.data(), kMapMagic.size());
  w.u8(kStoreVersion);
  w.u16(static_cast<std::uint16_t>(p.n));
  w.u8(static_cast<std::uint8_t>(p.m));
  w.u8(static_cast<std::uint8_t>(p.k));
  w.u64(map.n_classes());
  for (const auto& e : map.entries()) {
    for (auto i : e.code.maxes()) w.u16(i);
    for (auto i : e.code.mins()) w.u16(i);
    w.u64(static_cast<std::uint64_t>(e.label));
  }
  w.check();
}

inline LabelMap load_map(std::istream& is) {
  detail::LeReader r(is);
  detail::expect_magic(r, kMapMagic);
  detail::expect_version(r);
  const std::uint32_t n = r.u16("n"), m = r.u8("m"), k = r.u8("k");
  const std::uint64_t count = r.u64("entry_count");

  SystemParams params;
  std::uint64_t n_vects = 0;
  try {
    params = SystemParams(n, m, k);
    n_vects = count_vectors(params);
  } catch (const ParameterError& e) {
    throw LoadError(LoadErrorKind::kInvariant, e.what());
  }
  if (m + k > kMaxSignedEntries) throw LoadError(LoadErrorKind::kInvariant, "m + k exceeds code capacity");
  if (count > n_vects) throw LoadError(LoadErrorKind::kInvariant, "entry_count exceeds n_vects");

  std::vector<CenterCode> codes;
  std::vector<std::int64_t> labels;
  // The count is untrusted until the payload proves it.
  codes.reserve(std::min<std::uint64_t>(count, 1 << 16));
  labels.reserve(std::min<std::uint64_t>(count, 1 << 16));
  std::array<std::uint16_t, kMaxSignedEntries> idx{};
  for (std::uint64_t i = 0; i < count; ++i) {
    for (std::uint32_t j = 0; j < m + k; ++j) idx[j] = r.u16("entry index");
    const std::uint64_t label = r.u64("entry label");
    if (label > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) throw LoadError(LoadErrorKind::kInvariant, "label out of range");
    try {
      codes.emplace_back(std::span<const std::uint16_t>(idx.data(), m), std::span<const std::uint16_t>(idx.data() + m, k));
    } catch (const DomainError& e) {
      throw LoadError(LoadErrorKind::kInvariant, e.what());
    }
    if (codes.size() > 1 && !(codes[codes.size() - 2].key() < codes.back().key()))
      throw LoadError(LoadErrorKind::kInvariant, "entries are not in ascending code order");
    labels.push_back(static_cast<std::int64_t>(label));
  }
  try {
    return LabelMap(params, std::move(codes), labels);
  } catch (const Error& e) {
    throw LoadError(LoadErrorKind::kInvariant, e.what());
  }
}

inline void save_map(const LabelMap& map, const std::string& path) {
  auto out = detail::open_out(path);
  save_map(map, out);
}

inline LabelMap load_map(const std::string& path) {
  auto in = detail::open_in(path);
  return load_map(in);
}

/// Writes an embedding file whose row count is fixed up front.
class EmbeddingWriter {
 public:
  EmbeddingWriter(std::ostream& os, std::size_t dim, std::uint64_t rows) : w_(os), dim_(dim), rows_(rows) {
    if (dim == 0 || dim > 0xFFFF) throw ParameterError("embedding dimension must be in [1, 65535]");
    w_.bytes(kEmbeddingMagic.data(), kEmbeddingMagic.size());
    w_.u8(kStoreVersion);
    w_.u16(static_cast<std::uint16_t>(dim));
    w_.u64(rows);
    w_.u8(kDtypeF32);
  }

  void write_row(std::span<const float> row) {
    if (row.size() != dim_) throw InputError("row has the wrong dimension");
    if (written_ == rows_) throw InputError("more rows than declared in the header");
    for (float v : row) w_.f32(v);
    ++written_;
  }

  void finish() {
    if (written_ != rows_) throw InputError("fewer rows written than declared in the header");
    w_.check();
  }

 private:
  detail::LeWriter w_;
  std::size_t dim_;
  std::uint64_t rows_;
  std::uint64_t written_ = 0;
};

inline void save_batch(const EmbeddingBatch& batch, std::ostream& os) {
  EmbeddingWriter w(os, batch.dim(), batch.rows());
  for (std::size_t i = 0; i < batch.rows(); ++i) w.write_row(batch.row(i));
  w.finish();
}

inline void save_batch(const EmbeddingBatch& batch, const std::string& path) {
  auto out = detail::open_out(path);
  save_batch(batch, out);
}

struct EmbeddingFileHeader {
  std::uint16_t n = 0;
  std::uint64_t row_count = 0;
  std::uint8_t dtype = kDtypeF32;
};

/// Reads an embedding stream in file order, at most `batch_size` rows at a time.
class BatchReader {
 public:
  explicit BatchReader(std::istream& is, std::string source = {}) : r_(is), source_(std::move(source)) {
    detail::expect_magic(r_, kEmbeddingMagic);
    detail::expect_version(r_);
    header_.n = r_.u16("n");
    header_.row_count = r_.u64("row_count");
    header_.dtype = r_.u8("dtype");
    if (header_.dtype != kDtypeF32) throw LoadError(LoadErrorKind::kBadDtype, "dtype " + std::to_string(header_.dtype));
    if (header_.n == 0) throw LoadError(LoadErrorKind::kInvariant, "embedding dimension is zero");
  }

  const EmbeddingFileHeader& header() const { return header_; }
  std::uint64_t remaining() const { return header_.row_count - consumed_; }

  std::optional<EmbeddingBatch> next(std::size_t batch_size) {
    if (batch_size == 0) throw ParameterError("batch size must be positive");
    if (remaining() == 0) {
      if (!r_.at_end()) throw LoadError(LoadErrorKind::kInvariant, "payload longer than row_count x n");
      return std::nullopt;
    }
    const std::size_t rows = static_cast<std::size_t>(std::min<std::uint64_t>(batch_size, remaining()));
    const std::size_t count = rows * header_.n;
    raw_.resize(count * 4);
    r_.bytes(raw_.data(), raw_.size(), "embedding payload");
    std::vector<float> values(count);
    for (std::size_t i = 0; i < count; ++i) {
      const auto* b = reinterpret_cast<const unsigned char*>(raw_.data() + 4 * i);
      const std::uint32_t bits = std::uint32_t{b[0]} | (std::uint32_t{b[1]} << 8) | (std::uint32_t{b[2]} << 16) |
                                 (std::uint32_t{b[3]} << 24);
      values[i] = std::bit_cast<float>(bits);
    }
    consumed_ += rows;
    return EmbeddingBatch(header_.n, std::move(values), source_);
  }

 private:
  detail::LeReader r_;
  std::string source_;
  EmbeddingFileHeader header_;
  std::uint64_t consumed_ = 0;
  std::vector<char> raw_;
};

inline std::vector<EmbeddingBatch> stream_batches(std::istream& is, std::size_t batch_size, std::string source = {}) {
  BatchReader reader(is, std::move(source));
  std::vector<EmbeddingBatch> out;
  while (auto b = reader.next(batch_size)) out.push_back(std::move(*b));
  return out;
}

inline std::vector<EmbeddingBatch> stream_batches(const std::string& path, std::size_t batch_size) {
  auto in = detail::open_in(path);
  return stream_batches(in, batch_size, path);
}

inline EmbeddingBatch load_batch(std::istream& is, std::string source = {}) {
  BatchReader reader(is, source);
  const auto rows = reader.header().row_count;
  std::vector<float> values;
  values.reserve(rows * reader.header().n);
  while (auto b = reader.next(4096)) values.insert(values.end(), b->values().begin(), b->values().end());
  return EmbeddingBatch(reader.header().n, std::move(values), std::move(source));
}

inline EmbeddingBatch load_batch(const std::string& path) {
  auto in = detail::open_in(path);
  return load_batch(in, path);
}

}  // namespace lsc

#endif  // LSC_LABEL_STORE_HPP
