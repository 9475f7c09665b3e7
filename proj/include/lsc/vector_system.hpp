#ifndef LSC_VECTOR_SYSTEM_HPP
#define LSC_VECTOR_SYSTEM_HPP

// Vector systems V_n^{mk}: all length-n vectors with exactly m entries equal
// to +1, k entries equal to -1 and the rest zero.

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cmath>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <limits>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "lsc/error.hpp"

namespace lsc {

/// Codes pack each coordinate index into 16 bits, so n is capped here.
inline constexpr std::uint32_t kMaxDim = 65535;
/// Upper bound on m + k for anything that needs a CenterCode.
inline constexpr std::uint32_t kMaxSignedEntries = 8;

struct SystemParams {
  std::uint32_t n = 0;
  std::uint32_t m = 0;
  std::uint32_t k = 0;

  SystemParams() = default;
  SystemParams(std::uint32_t n_, std::uint32_t m_, std::uint32_t k_) : n(n_), m(m_), k(k_) {
    validate();
  }

  void validate() const {
    if (m + k < 1) throw ParameterError("vector system needs m + k >= 1");
    if (m + k > n)
      throw ParameterError("vector system needs m + k <= n (n=" + std::to_string(n) +
                           ", m=" + std::to_string(m) + ", k=" + std::to_string(k) + ")");
  }

  std::uint32_t signed_entries() const { return m + k; }

  friend bool operator==(const SystemParams&, const SystemParams&) = default;
};

namespace detail {

using u128 = unsigned __int128;

inline u128 checked_binomial(std::uint64_t n, std::uint64_t r) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  u128 acc = 1;
  for (std::uint64_t i = 0; i < r; ++i) {
    u128 next;
    if (__builtin_mul_overflow(acc, static_cast<u128>(n - i), &next))
      throw ParameterError("binomial coefficient overflows 128 bits");
    acc = next / (i + 1);  // exact: acc * (n-i) is C(n, i+1) * (i+1)
  }
  return acc;
}

}  // namespace detail

/// |V_n^{mk}| = C(n, m) * C(n - m, k), computed exactly. For m = k = 2 this is
/// n (n-1) (n-2) (n-3) / 4.
inline std::uint64_t count_vectors(const SystemParams& params) {
  params.validate();
  const detail::u128 a = detail::checked_binomial(params.n, params.m);
  const detail::u128 b = detail::checked_binomial(params.n - params.m, params.k);
  detail::u128 total;
  if (__builtin_mul_overflow(a, b, &total) || total > std::numeric_limits<std::uint64_t>::max())
    throw ParameterError("vector count does not fit in 64 bits");
  return static_cast<std::uint64_t>(total);
}

/// Smallest n with count_vectors(n, m, k) >= n_classes.
inline std::uint32_t choose_min_dim(std::uint64_t n_classes, std::uint32_t m, std::uint32_t k) {
  if (n_classes < 1) throw ParameterError("n_classes must be positive");
  if (m + k < 1) throw ParameterError("vector system needs m + k >= 1");
  for (std::uint32_t n = m + k;; ++n) {
    if (count_vectors(SystemParams(n, m, k)) >= n_classes) return n;
  }
}

using PackedKey = unsigned __int128;

/// Sorted index tuple (maxes, mins) identifying one center vector.
class CenterCode {
 public:
  static constexpr std::size_t kCapacity = kMaxSignedEntries;

  CenterCode() = default;

  /// Validating constructor: both lists strictly ascending and disjoint.
  CenterCode(std::span<const std::uint16_t> maxes, std::span<const std::uint16_t> mins) {
    if (maxes.size() + mins.size() > kCapacity)
      throw DomainError("center code holds at most " + std::to_string(kCapacity) + " indexes");
    if (!std::is_sorted(maxes.begin(), maxes.end(), std::less_equal<>()))
      throw DomainError("maxes must be strictly ascending");
    if (!std::is_sorted(mins.begin(), mins.end(), std::less_equal<>()))
      throw DomainError("mins must be strictly ascending");
    for (auto a : maxes)
      if (std::binary_search(mins.begin(), mins.end(), a))
        throw DomainError("maxes and mins must be disjoint");
    m_ = static_cast<std::uint8_t>(maxes.size());
    k_ = static_cast<std::uint8_t>(mins.size());
    std::copy(maxes.begin(), maxes.end(), idx_.begin());
    std::copy(mins.begin(), mins.end(), idx_.begin() + m_);
  }

  CenterCode(std::initializer_list<std::uint16_t> maxes, std::initializer_list<std::uint16_t> mins)
      : CenterCode(std::span<const std::uint16_t>(maxes.begin(), maxes.size()),
                   std::span<const std::uint16_t>(mins.begin(), mins.size())) {}

  /// Caller guarantees sorted, disjoint lists with m + k <= kCapacity.
  static CenterCode unchecked(const std::uint16_t* maxes, std::uint32_t m, const std::uint16_t* mins,
                              std::uint32_t k) {
    CenterCode c;
    c.m_ = static_cast<std::uint8_t>(m);
    c.k_ = static_cast<std::uint8_t>(k);
    std::copy(maxes, maxes + m, c.idx_.begin());
    std::copy(mins, mins + k, c.idx_.begin() + m);
    return c;
  }

  std::span<const std::uint16_t> maxes() const { return {idx_.data(), m_}; }
  std::span<const std::uint16_t> mins() const { return {idx_.data() + m_, k_}; }
  std::uint32_t m() const { return m_; }
  std::uint32_t k() const { return k_; }

  bool valid_for(const SystemParams& params) const {
    if (m_ != params.m || k_ != params.k) return false;
    for (std::uint32_t i = 0; i < m_ + k_; ++i)
      if (idx_[i] >= params.n) return false;
    return true;
  }

  /// Indexes as 16-bit lanes, maxes first, most significant lane first. For a
  /// fixed (m, k) integer order of keys equals lexicographic order of codes.
  PackedKey key() const {
    PackedKey key = 0;
    for (std::uint32_t i = 0; i < std::uint32_t{m_} + k_; ++i) key = (key << 16) | idx_[i];
    return key;
  }

  static CenterCode from_key(PackedKey key, std::uint32_t m, std::uint32_t k) {
    CenterCode c;
    c.m_ = static_cast<std::uint8_t>(m);
    c.k_ = static_cast<std::uint8_t>(k);
    for (std::uint32_t i = m + k; i-- > 0;) {
      c.idx_[i] = static_cast<std::uint16_t>(key & 0xFFFF);
      key >>= 16;
    }
    return c;
  }

  friend bool operator==(const CenterCode& a, const CenterCode& b) {
    return a.m_ == b.m_ && a.k_ == b.k_ && a.key() == b.key();
  }
  friend std::strong_ordering operator<=>(const CenterCode& a, const CenterCode& b) {
    if (auto c = std::tie(a.m_, a.k_) <=> std::tie(b.m_, b.k_); c != 0) return c;
    const auto ka = a.key(), kb = b.key();
    return ka < kb ? std::strong_ordering::less
                   : (ka > kb ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  std::array<std::uint16_t, kCapacity> idx_{};
  std::uint8_t m_ = 0;
  std::uint8_t k_ = 0;
};

struct PackedKeyHash {
  std::size_t operator()(PackedKey key) const noexcept {
    std::uint64_t x = static_cast<std::uint64_t>(key) ^ (static_cast<std::uint64_t>(key >> 64) * 0x9E3779B97F4A7C15ULL);
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return static_cast<std::size_t>(x);
  }
};

/// Dense {-1, 0, 1} form of a center.
struct CenterVector {
  std::vector<std::int8_t> coords;

  std::size_t size() const { return coords.size(); }
  double norm() const {
    double s = 0;
    for (auto c : coords) s += c * c;
    return std::sqrt(s);
  }
  friend bool operator==(const CenterVector&, const CenterVector&) = default;
  friend auto operator<=>(const CenterVector&, const CenterVector&) = default;
};

inline bool is_member(const CenterVector& v, const SystemParams& params) {
  if (v.size() != params.n) return false;
  std::uint32_t plus = 0, minus = 0;
  for (auto c : v.coords) {
    if (c == 1) ++plus;
    else if (c == -1) ++minus;
    else if (c != 0) return false;
  }
  return plus == params.m && minus == params.k;
}

inline CenterCode encode(const CenterVector& v, const SystemParams& params) {
  if (!is_member(v, params)) throw DomainError("vector is not a member of the vector system");
  if (params.m + params.k > kMaxSignedEntries) throw DomainError("m + k exceeds code capacity");
  std::array<std::uint16_t, kMaxSignedEntries> maxes{}, mins{};
  std::uint32_t a = 0, b = 0;
  for (std::uint32_t i = 0; i < params.n; ++i) {
    if (v.coords[i] == 1) maxes[a++] = static_cast<std::uint16_t>(i);
    else if (v.coords[i] == -1) mins[b++] = static_cast<std::uint16_t>(i);
  }
  return CenterCode::unchecked(maxes.data(), a, mins.data(), b);
}

inline CenterVector decode(const CenterCode& code, const SystemParams& params) {
  if (!code.valid_for(params)) throw DomainError("center code does not match the vector system");
  CenterVector v{std::vector<std::int8_t>(params.n, 0)};
  for (auto i : code.maxes()) v.coords[i] = 1;
  for (auto i : code.mins()) v.coords[i] = -1;
  return v;
}

/// Lazy enumeration of V_n^{mk} as codes, lexicographic over (maxes, mins).
/// The mins combination ranges over the indexes not taken by maxes.
class CodeEnumerator {
 public:
  explicit CodeEnumerator(const SystemParams& params) : params_(params) {
    params_.validate();
    if (params_.n > kMaxDim) throw ParameterError("n exceeds 65535");
    if (params_.m + params_.k > kMaxSignedEntries) throw ParameterError("m + k exceeds code capacity");
    max_comb_.resize(params_.m);
    for (std::uint32_t i = 0; i < params_.m; ++i) max_comb_[i] = i;
    min_comb_.resize(params_.k);
    reset_mins();
  }

  /// Writes the next code; false once the stream is exhausted.
  bool next(CenterCode& out) {
    if (done_) return false;
    std::array<std::uint16_t, kMaxSignedEntries> maxes{}, mins{};
    for (std::uint32_t i = 0; i < params_.m; ++i) maxes[i] = static_cast<std::uint16_t>(max_comb_[i]);
    for (std::uint32_t i = 0; i < params_.k; ++i) mins[i] = static_cast<std::uint16_t>(rest_[min_comb_[i]]);
    out = CenterCode::unchecked(maxes.data(), params_.m, mins.data(), params_.k);
    advance();
    return true;
  }

 private:
  static bool step(std::vector<std::uint32_t>& comb, std::uint32_t universe) {
    const auto r = static_cast<std::uint32_t>(comb.size());
    for (std::uint32_t i = r; i-- > 0;) {
      if (comb[i] < universe - r + i) {
        ++comb[i];
        for (std::uint32_t j = i + 1; j < r; ++j) comb[j] = comb[j - 1] + 1;
        return true;
      }
    }
    return false;
  }

  void reset_mins() {
    rest_.clear();
    std::uint32_t a = 0;
    for (std::uint32_t i = 0; i < params_.n; ++i) {
      if (a < params_.m && max_comb_[a] == i) {
        ++a;
        continue;
      }
      rest_.push_back(i);
    }
    for (std::uint32_t i = 0; i < params_.k; ++i) min_comb_[i] = i;
  }

  void advance() {
    if (step(min_comb_, params_.n - params_.m)) return;
    if (step(max_comb_, params_.n)) {
      reset_mins();
      return;
    }
    done_ = true;
  }

  SystemParams params_;
  std::vector<std::uint32_t> max_comb_;
  std::vector<std::uint32_t> min_comb_;
  std::vector<std::uint32_t> rest_;
  bool done_ = false;
};

inline std::vector<CenterCode> enumerate_codes(const SystemParams& params) {
  std::vector<CenterCode> out;
  out.reserve(count_vectors(params));
  CodeEnumerator it(params);
  CenterCode c;
  while (it.next(c)) out.push_back(c);
  return out;
}

inline std::vector<CenterVector> enumerate(const SystemParams& params) {
  std::vector<CenterVector> out;
  out.reserve(count_vectors(params));
  CodeEnumerator it(params);
  CenterCode c;
  while (it.next(c)) out.push_back(decode(c, params));
  return out;
}

}  // namespace lsc

#endif  // LSC_VECTOR_SYSTEM_HPP
