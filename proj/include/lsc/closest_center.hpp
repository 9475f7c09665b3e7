#ifndef LSC_CLOSEST_CENTER_HPP
#define LSC_CLOSEST_CENTER_HPP

// Constant-time closest-center search: the closest member of V_n^{mk} to a
// query w places +1 at the m largest and -1 at the k smallest coordinates of w.
// The label is then a single hash lookup on the resulting index tuple.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "lsc/label_map.hpp"
#include "lsc/vector_system.hpp"

namespace lsc {

/// Row-major b x dim matrix of 32-bit embeddings.
class EmbeddingBatch {
 public:
  EmbeddingBatch() = default;
  EmbeddingBatch(std::size_t dim, std::vector<float> values, std::string source = {})
      : dim_(dim), values_(std::move(values)), source_(std::move(source)) {
    if (dim_ == 0) throw InputError("embedding dimension must be positive");
    if (values_.size() % dim_ != 0) throw InputError("embedding payload is not a whole number of rows");
  }

  std::size_t rows() const { return dim_ == 0 ? 0 : values_.size() / dim_; }
  std::size_t dim() const { return dim_; }
  std::span<const float> row(std::size_t i) const { return {values_.data() + i * dim_, dim_}; }
  std::span<const float> values() const { return values_; }
  const std::string& source() const { return source_; }

  friend bool operator==(const EmbeddingBatch& a, const EmbeddingBatch& b) {
    return a.dim_ == b.dim_ && a.values_ == b.values_;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<float> values_;
  std::string source_;
};

struct Prediction {
  std::int64_t label = kUnlabeled;
  CenterCode code;
  bool on_tie_boundary = false;
};

struct ClosestCode {
  CenterCode code;
  /// Set when the m-th/(m+1)-th largest or k-th/(k+1)-th smallest coordinates
  /// are equal, i.e. the query sits outside the strict-gap region.
  bool on_tie_boundary = false;
};

namespace detail {

// Keeps the `cap` best (value, index) pairs seen so far, best first. `Better`
// is strict, so among equal values the earlier (lower) index stays ahead.
// Each offer bubbles through every slot with selects instead of branches:
// whether a coordinate enters the top set is data dependent and mispredicts.
template <typename T, typename Better>
struct SmallSelect {
  std::uint32_t cap = 0;
  T val[kMaxSignedEntries + 1];
  std::uint16_t idx[kMaxSignedEntries + 1];

  // `worst` must lose to every value offered later.
  SmallSelect(std::uint32_t capacity, T worst) : cap(capacity) {
    std::fill_n(val, cap, worst);
    std::fill_n(idx, cap, std::uint16_t{0xFFFF});
  }

  void offer(T v, std::uint16_t i) {
    Better better;
    for (std::uint32_t s = 0; s < cap; ++s) {
      const bool take = better(v, val[s]);
      const T pv = val[s];
      const std::uint16_t pi = idx[s];
      val[s] = take ? v : pv;
      idx[s] = take ? i : pi;
      v = take ? pv : v;
      i = take ? pi : i;
    }
  }
};

}  // namespace detail

template <std::floating_point T>
ClosestCode closest_code(std::span<const T> w, const SystemParams& params) {
  const std::uint32_t n = params.n, m = params.m, k = params.k;
  if (w.size() != n)
    throw InputError("query has " + std::to_string(w.size()) + " coordinates, system has n=" + std::to_string(n));
  if (m + k > kMaxSignedEntries) throw ParameterError("m + k exceeds code capacity");

  // Keep one extra slot on each side to read the boundary gap.
  constexpr T kInf = std::numeric_limits<T>::infinity();
  detail::SmallSelect<T, std::greater<T>> top(std::min(m + 1, n), -kInf);
  detail::SmallSelect<T, std::less<T>> bottom(std::min(k + 1, n), kInf);
  bool nonzero = false;
  for (std::uint32_t i = 0; i < n; ++i) {
    const T v = w[i];
    if (!std::isfinite(v)) throw InputError("query has a non-finite coordinate");
    nonzero |= (v != T(0));
    if (m > 0) top.offer(v, static_cast<std::uint16_t>(i));
    if (k > 0) bottom.offer(v, static_cast<std::uint16_t>(i));
  }
  if (!nonzero) throw InputError("query has zero norm");

  ClosestCode out;
  out.on_tie_boundary = (m > 0 && n > m && top.val[m - 1] == top.val[m]) ||
                        (k > 0 && n > k && bottom.val[k - 1] == bottom.val[k]);

  std::uint16_t maxes[kMaxSignedEntries], mins[kMaxSignedEntries];
  std::copy(top.idx, top.idx + m, maxes);
  std::copy(bottom.idx, bottom.idx + k, mins);
  std::sort(maxes, maxes + m);
  std::sort(mins, mins + k);

  bool overlap = false;
  for (std::uint32_t a = 0; a < m && !overlap; ++a)
    overlap = std::binary_search(mins, mins + k, maxes[a]);
  if (overlap) {
    // Only reachable when the two thresholds coincide (a tie); reselect the
    // minimums among coordinates not already taken.
    detail::SmallSelect<T, std::less<T>> rest(k, kInf);
    for (std::uint32_t i = 0; i < n; ++i)
      if (!std::binary_search(maxes, maxes + m, static_cast<std::uint16_t>(i)))
        rest.offer(w[i], static_cast<std::uint16_t>(i));
    std::copy(rest.idx, rest.idx + k, mins);
    std::sort(mins, mins + k);
    out.on_tie_boundary = true;
  }
  out.code = CenterCode::unchecked(maxes, m, mins, k);
  return out;
}

template <std::floating_point T>
ClosestCode closest_code(const std::vector<T>& w, const SystemParams& params) {
  return closest_code(std::span<const T>(w), params);
}

/// Labels rows [begin, end) of `batch` into `out`.
inline void predict_range(const EmbeddingBatch& batch, const LabelMap& map, std::size_t begin, std::size_t end,
                          std::span<Prediction> out) {
  constexpr std::size_t kPrefetchDistance = 8;
  for (std::size_t i = begin; i < end; ++i) {
    const ClosestCode cc = closest_code(batch.row(i), map.params());
    out[i].code = cc.code;
    out[i].on_tie_boundary = cc.on_tie_boundary;
    if (i >= begin + kPrefetchDistance) {
      // Codes for earlier rows are final; resolve them while later lookups are in flight.
      const std::size_t j = i - kPrefetchDistance;
      out[j].label = map.find(out[j].code);
    }
    map.prefetch(cc.code.key());
  }
  for (std::size_t j = (end > begin + kPrefetchDistance ? end - kPrefetchDistance : begin); j < end; ++j)
    out[j].label = map.find(out[j].code);
}

inline std::vector<Prediction> predict(const EmbeddingBatch& batch, const LabelMap& map) {
  if (batch.dim() != map.params().n)
    throw InputError("batch dimension " + std::to_string(batch.dim()) + " does not match n=" +
                     std::to_string(map.params().n));
  std::vector<Prediction> out(batch.rows());
  predict_range(batch, map, 0, batch.rows(), out);
  return out;
}

/// Same result as predict(), with rows partitioned across `threads` workers.
inline std::vector<Prediction> predict_parallel(const EmbeddingBatch& batch, const LabelMap& map,
                                                unsigned threads) {
  if (threads <= 1 || batch.rows() < 2 * threads) return predict(batch, map);
  if (batch.dim() != map.params().n) throw InputError("batch dimension does not match the label map");
  std::vector<Prediction> out(batch.rows());
  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(threads);
  const std::size_t chunk = (batch.rows() + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t begin = t * chunk, end = std::min(batch.rows(), begin + chunk);
    if (begin >= end) break;
    workers.emplace_back([&, t, begin, end] {
      try {
        predict_range(batch, map, begin, end, out);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

inline CenterVector reconstruct_center(const Prediction& p, const SystemParams& params) {
  return decode(p.code, params);
}

}  // namespace lsc

#endif  // LSC_CLOSEST_CENTER_HPP
