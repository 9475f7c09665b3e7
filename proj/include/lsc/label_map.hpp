#ifndef LSC_LABEL_MAP_HPP
#define LSC_LABEL_MAP_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdlib>
#include <new>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lsc/vector_system.hpp"

#if defined(__linux__)
#include <sys/mman.h>
#endif

namespace lsc {

inline constexpr std::int64_t kUnlabeled = -1;

namespace detail {

// Large lookup tables are probed at random, so on Linux they ask for
// transparent huge pages to keep TLB misses off the query path.
template <typename T>
struct TableAllocator {
  using value_type = T;
  static constexpr std::size_t kHugePage = std::size_t{2} << 20;

  TableAllocator() = default;
  template <typename U>
  TableAllocator(const TableAllocator<U>&) noexcept {}

  T* allocate(std::size_t n) {
    const std::size_t bytes = n * sizeof(T);
    if (bytes < kHugePage) return static_cast<T*>(::operator new(bytes, std::align_val_t{alignof(T)}));
    const std::size_t rounded = (bytes + kHugePage - 1) / kHugePage * kHugePage;
    void* p = std::aligned_alloc(kHugePage, rounded);
    if (!p) throw std::bad_alloc();
#if defined(__linux__) && defined(MADV_HUGEPAGE)
    ::madvise(p, rounded, MADV_HUGEPAGE);
#endif
    return static_cast<T*>(p);
  }

  void deallocate(T* p, std::size_t n) noexcept {
    if (n * sizeof(T) < kHugePage) {
      ::operator delete(p, std::align_val_t{alignof(T)});
    } else {
      std::free(p);
    }
  }

  friend bool operator==(const TableAllocator&, const TableAllocator&) { return true; }
};

}  // namespace detail

/// Immutable CenterCode -> label dictionary with O(1) expected lookup.
///
/// Backed by an open-addressing table keyed by the packed code, plus a
/// key-sorted entry list used for persistence and brute-force scans.
class LabelMap {
 public:
  struct Entry {
    CenterCode code;
    std::int64_t label;
  };

  LabelMap() = default;

  LabelMap(const SystemParams& params, std::vector<CenterCode> codes, std::span<const std::int64_t> labels)
      : params_(params) {
    params_.validate();
    if (params_.n > kMaxDim) throw ConstructionError("n exceeds 65535");
    if (params_.m + params_.k > kMaxSignedEntries) throw ConstructionError("m + k exceeds code capacity");
    if (codes.size() != labels.size()) throw ConstructionError("center and label counts differ");
    n_vects_ = count_vectors(params_);
    if (codes.size() > n_vects_)
      throw ConstructionError("label count " + std::to_string(codes.size()) + " exceeds n_vects " +
                              std::to_string(n_vects_));

    entries_.reserve(codes.size());
    for (std::size_t i = 0; i < codes.size(); ++i) {
      if (!codes[i].valid_for(params_)) throw ConstructionError("center " + std::to_string(i) + " is not in the system");
      if (labels[i] < 0) throw ConstructionError("label ids must be non-negative");
      entries_.push_back({codes[i], labels[i]});
    }
    std::sort(entries_.begin(), entries_.end(),
              [](const Entry& a, const Entry& b) { return a.code.key() < b.code.key(); });
    for (std::size_t i = 1; i < entries_.size(); ++i)
      if (entries_[i - 1].code == entries_[i].code) throw ConstructionError("duplicate center in label map");

    by_label_.resize(entries_.size());
    for (std::size_t i = 0; i < entries_.size(); ++i) by_label_[i] = {entries_[i].label, i};
    std::sort(by_label_.begin(), by_label_.end());
    for (std::size_t i = 1; i < by_label_.size(); ++i)
      if (by_label_[i - 1].first == by_label_[i].first) throw ConstructionError("duplicate label id in label map");

    build_table();
  }

  const SystemParams& params() const { return params_; }
  std::uint64_t n_classes() const { return entries_.size(); }
  std::uint64_t n_vects() const { return n_vects_; }
  /// Unlabeled centers: n_vects - n_classes.
  std::uint64_t n_unlabeled() const { return n_vects_ - entries_.size(); }
  /// k_l = n_classes / n_vects.
  double label_coefficient() const {
    return n_vects_ == 0 ? 0.0 : static_cast<double>(entries_.size()) / static_cast<double>(n_vects_);
  }
  bool empty() const { return entries_.empty(); }

  /// Entries in canonical order (ascending packed key).
  std::span<const Entry> entries() const { return entries_; }

  std::int64_t find(PackedKey key) const {
    if (slots_.empty()) return kUnlabeled;
    std::size_t i = PackedKeyHash{}(key) & mask_;
    while (true) {
      const Slot& s = slots_[i];
      if (s.key == key) return s.label;
      if (s.key == kEmpty) return kUnlabeled;
      i = (i + 1) & mask_;
    }
  }
  std::int64_t find(const CenterCode& code) const { return find(code.key()); }
  bool contains(const CenterCode& code) const { return find(code.key()) != kUnlabeled; }

  void prefetch(PackedKey key) const {
    if (!slots_.empty()) __builtin_prefetch(&slots_[PackedKeyHash{}(key)&mask_]);
  }

  /// Code stored for a label id, if any.
  const CenterCode* code_for_label(std::int64_t label) const {
    auto it = std::lower_bound(by_label_.begin(), by_label_.end(), std::pair<std::int64_t, std::size_t>{label, 0});
    if (it == by_label_.end() || it->first != label) return nullptr;
    return &entries_[it->second].code;
  }

  /// Entry indexes ordered by ascending label id.
  std::vector<std::size_t> label_order() const {
    std::vector<std::size_t> out;
    out.reserve(by_label_.size());
    for (const auto& p : by_label_) out.push_back(p.second);
    return out;
  }

  friend bool operator==(const LabelMap& a, const LabelMap& b) {
    if (!(a.params_ == b.params_) || a.entries_.size() != b.entries_.size()) return false;
    for (std::size_t i = 0; i < a.entries_.size(); ++i)
      if (!(a.entries_[i].code == b.entries_[i].code) || a.entries_[i].label != b.entries_[i].label) return false;
    return true;
  }

 private:
  // Lanes are 16-bit indexes < 65535, so an all-ones key never occurs.
  static constexpr PackedKey kEmpty = ~PackedKey{0};

  struct Slot {
    PackedKey key = kEmpty;
    std::int64_t label = kUnlabeled;
  };

  void build_table() {
    const std::size_t capacity = std::bit_ceil(std::max<std::size_t>(16, entries_.size() * 2));
    slots_.assign(capacity, Slot{});
    mask_ = capacity - 1;
    for (const auto& e : entries_) {
      const PackedKey key = e.code.key();
      std::size_t i = PackedKeyHash{}(key) & mask_;
      while (slots_[i].key != kEmpty) i = (i + 1) & mask_;
      slots_[i] = Slot{key, e.label};
    }
  }

  SystemParams params_;
  std::uint64_t n_vects_ = 0;
  std::vector<Entry> entries_;
  std::vector<std::pair<std::int64_t, std::size_t>> by_label_;
  std::vector<Slot, detail::TableAllocator<Slot>> slots_;
  std::size_t mask_ = 0;
};

inline LabelMap build_label_map(const SystemParams& params, std::vector<CenterCode> codes,
                                std::span<const std::int64_t> labels) {
  return LabelMap(params, std::move(codes), labels);
}

inline LabelMap build_label_map(const SystemParams& params, std::span<const CenterVector> centers,
                                std::span<const std::int64_t> labels) {
  if (centers.size() != labels.size()) throw ConstructionError("center and label counts differ");
  std::vector<CenterCode> codes;
  codes.reserve(centers.size());
  for (const auto& c : centers) {
    if (!is_member(c, params)) throw ConstructionError("center is not a member of the vector system");
    codes.push_back(encode(c, params));
  }
  return LabelMap(params, std::move(codes), labels);
}

/// Labels 0..n_classes-1 assigned to the first n_classes centers in canonical order.
inline LabelMap canonical_label_map(const SystemParams& params, std::uint64_t n_classes) {
  if (n_classes > count_vectors(params)) throw ParameterError("n_classes exceeds n_vects");
  std::vector<CenterCode> codes;
  codes.reserve(n_classes);
  CodeEnumerator it(params);
  CenterCode c;
  while (codes.size() < n_classes && it.next(c)) codes.push_back(c);
  std::vector<std::int64_t> labels(n_classes);
  for (std::uint64_t i = 0; i < n_classes; ++i) labels[i] = static_cast<std::int64_t>(i);
  return LabelMap(params, std::move(codes), labels);
}

}  // namespace lsc

#endif  // LSC_LABEL_MAP_HPP
