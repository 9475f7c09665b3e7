#ifndef LSC_LABELED_SEARCH_HPP
#define LSC_LABELED_SEARCH_HPP

// Closest *labeled* center when the unconstrained closest center carries no
// label.
//
// The query w is sorted into x with non-increasing coordinates (x = w[sigma]).
// In that frame the graph G has V_n^{mk} as vertices and an edge v1 -> v2
// whenever v2 comes from v1 by a basic permutation: a -1 swapped with the
// entry before it, or a +1 swapped with the entry after it. With x
// non-increasing every edge weight <x, v1 - v2> is >= 0, the source
// (1..1, 0..0, -1..-1) is the unconstrained optimum, and the path weight from
// the source to v is the similarity loss <x, source - v>. The closest labeled
// center is the labeled vertex nearest to the source in that path metric.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <queue>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "lsc/closest_center.hpp"
#include "lsc/label_map.hpp"
#include "lsc/vector_system.hpp"

namespace lsc {

enum class SearchStrategy { kBruteForce, kDfs, kBestFirst };

inline const char* to_string(SearchStrategy s) {
  switch (s) {
    case SearchStrategy::kBruteForce: return "bruteforce";
    case SearchStrategy::kDfs: return "dfs";
    case SearchStrategy::kBestFirst: return "bestfirst";
  }
  return "?";
}

struct SortedQuery {
  std::vector<double> x;            // non-increasing
  std::vector<std::uint32_t> sigma;  // x[i] == w[sigma[i]]
  std::vector<double> x_prime;      // x[i] - x[i + 1], all >= 0
};

template <std::floating_point T>
SortedQuery sort_query(std::span<const T> w) {
  SortedQuery q;
  const auto n = static_cast<std::uint32_t>(w.size());
  q.sigma.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) q.sigma[i] = i;
  std::stable_sort(q.sigma.begin(), q.sigma.end(), [&](std::uint32_t a, std::uint32_t b) { return w[a] > w[b]; });
  q.x.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) q.x[i] = static_cast<double>(w[q.sigma[i]]);
  q.x_prime.resize(n > 0 ? n - 1 : 0);
  for (std::uint32_t i = 0; i + 1 < n; ++i) q.x_prime[i] = q.x[i] - q.x[i + 1];
  return q;
}

/// (1, ..., 1, 0, ..., 0, -1, ..., -1): the source vertex of G.
inline CenterVector start_vertex(const SystemParams& params) {
  params.validate();
  CenterVector v{std::vector<std::int8_t>(params.n, 0)};
  for (std::uint32_t i = 0; i < params.m; ++i) v.coords[i] = 1;
  for (std::uint32_t i = params.n - params.k; i < params.n; ++i) v.coords[i] = -1;
  return v;
}

/// (-1, ..., -1, 0, ..., 0, 1, ..., 1): the only vertex without outgoing edges.
inline CenterVector sink_vertex(const SystemParams& params) {
  params.validate();
  CenterVector v{std::vector<std::int8_t>(params.n, 0)};
  for (std::uint32_t i = 0; i < params.k; ++i) v.coords[i] = -1;
  for (std::uint32_t i = params.n - params.m; i < params.n; ++i) v.coords[i] = 1;
  return v;
}

inline std::vector<CenterVector> basic_successors(const CenterVector& v) {
  std::vector<CenterVector> out;
  const std::size_t n = v.size();
  auto push_swap = [&](std::size_t i) {
    CenterVector s = v;
    std::swap(s.coords[i], s.coords[i + 1]);
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(std::move(s));
  };
  for (std::size_t i = 0; i + 1 < n; ++i) {
    // A (1, -1) pair is reachable both ways; push_swap drops the duplicate.
    if (v.coords[i + 1] == -1 && v.coords[i] != -1) push_swap(i);
    if (v.coords[i] == 1 && v.coords[i + 1] != 1) push_swap(i);
  }
  return out;
}

inline double inner_product(const std::vector<double>& x, const CenterVector& v) {
  double s = 0;
  for (std::size_t i = 0; i < v.size(); ++i) s += x[i] * v.coords[i];
  return s;
}

struct PermGraphEdge {
  CenterVector from;
  CenterVector to;
  double weight;
};

/// Outgoing edges of v in G_x, weighted by <x, from - to>.
inline std::vector<PermGraphEdge> outgoing_edges(const CenterVector& v, const SortedQuery& q) {
  std::vector<PermGraphEdge> out;
  for (auto& s : basic_successors(v)) {
    double w = 0;
    for (std::size_t i = 0; i < v.size(); ++i) w += q.x[i] * (v.coords[i] - s.coords[i]);
    out.push_back({v, std::move(s), w});
  }
  return out;
}

/// Maps a sorted-frame vertex back to the query's coordinate frame.
inline CenterVector unpermute(const CenterVector& sorted, std::span<const std::uint32_t> sigma) {
  CenterVector v{std::vector<std::int8_t>(sorted.size(), 0)};
  for (std::size_t i = 0; i < sorted.size(); ++i) v.coords[sigma[i]] = sorted.coords[i];
  return v;
}

/// <v, w> for the center with code c, accumulated in double in ascending
/// index order. Every search strategy ranks candidates with this same sum.
template <std::floating_point T>
double signed_score(const CenterCode& c, std::span<const T> w) {
  double s = 0;
  for (auto i : c.maxes()) s += static_cast<double>(w[i]);
  for (auto i : c.mins()) s -= static_cast<double>(w[i]);
  return s;
}

namespace detail {

template <std::floating_point T>
double score_tolerance(std::span<const T> w, const SystemParams& p) {
  double amax = 0;
  for (auto v : w) amax = std::max(amax, std::abs(static_cast<double>(v)));
  return 1e-12 * (1.0 + amax * (p.m + p.k));
}

// Winner among candidate codes: highest score, and among those within `tol`
// of the best, the lowest canonical key. Flags a tie when that set has more
// than one member.
template <std::floating_point T>
Prediction pick_winner(std::span<const CenterCode> candidates, std::span<const T> w, const LabelMap& map,
                       double tol) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& c : candidates) best = std::max(best, signed_score(c, w));
  Prediction p;
  std::size_t tied = 0;
  for (const auto& c : candidates) {
    if (signed_score(c, w) < best - tol) continue;
    if (tied == 0 || c.key() < p.code.key()) p.code = c;
    ++tied;
  }
  p.on_tie_boundary = tied > 1;
  p.label = map.find(p.code);
  return p;
}

inline CenterCode sorted_vertex_code(const CenterVector& sorted, std::span<const std::uint32_t> sigma,
                                     const SystemParams& p) {
  std::uint16_t maxes[kMaxSignedEntries], mins[kMaxSignedEntries];
  std::uint32_t a = 0, b = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted.coords[i] == 1) maxes[a++] = static_cast<std::uint16_t>(sigma[i]);
    else if (sorted.coords[i] == -1) mins[b++] = static_cast<std::uint16_t>(sigma[i]);
  }
  std::sort(maxes, maxes + a);
  std::sort(mins, mins + b);
  return CenterCode::unchecked(maxes, p.m, mins, p.k);
}

template <std::floating_point T>
Prediction search_brute_force(std::span<const T> w, const LabelMap& map, double tol) {
  std::vector<CenterCode> codes;
  codes.reserve(map.entries().size());
  for (const auto& e : map.entries()) codes.push_back(e.code);
  return pick_winner<T>(codes, w, map, tol);
}

// Depth-first expansion from the source, stopping at labeled vertices and at
// the sink. Visited vertices are memoized; the candidate set is unchanged by
// that since a vertex's expansion does not depend on how it was reached.
template <std::floating_point T>
Prediction search_dfs(std::span<const T> w, const LabelMap& map, double tol) {
  const SystemParams& p = map.params();
  const SortedQuery q = sort_query(w);
  const CenterVector sink = sink_vertex(p);
  std::unordered_set<PackedKey, PackedKeyHash> visited;
  std::vector<CenterVector> stack{start_vertex(p)};
  visited.insert(encode(stack.back(), p).key());
  std::vector<CenterCode> candidates;
  while (!stack.empty()) {
    CenterVector current = std::move(stack.back());
    stack.pop_back();
    const CenterCode original = sorted_vertex_code(current, q.sigma, p);
    const bool labeled = map.contains(original);
    if (labeled) candidates.push_back(original);
    if (current == sink) continue;  // unlabeled sink: nothing to add
    // Below a labeled vertex only zero-weight edges can lead to an equal
    // score; following them lets exact ties be reported.
    const double here = inner_product(q.x, current);
    for (auto& s : basic_successors(current)) {
      if (labeled && here - inner_product(q.x, s) > tol) continue;
      if (visited.insert(encode(s, p).key()).second) stack.push_back(std::move(s));
    }
  }
  if (candidates.empty()) throw InputError("no labeled center reachable");
  return pick_winner<T>(candidates, w, map, tol);
}

// Best-first expansion by <x, v>. Edge weights are non-negative, so vertices
// leave the queue in non-increasing similarity and the first labeled vertex
// popped is optimal; popping continues only through the tie tolerance.
template <std::floating_point T>
Prediction search_best_first(std::span<const T> w, const LabelMap& map, double tol) {
  const SystemParams& p = map.params();
  const SortedQuery q = sort_query(w);
  struct Item {
    double priority;
    CenterVector v;
    bool operator<(const Item& o) const { return priority < o.priority; }
  };
  std::priority_queue<Item> frontier;
  std::unordered_set<PackedKey, PackedKeyHash> visited;
  CenterVector start = start_vertex(p);
  visited.insert(encode(start, p).key());
  frontier.push({inner_product(q.x, start), std::move(start)});

  std::vector<CenterCode> candidates;
  double best = -std::numeric_limits<double>::infinity();
  while (!frontier.empty()) {
    if (!candidates.empty() && frontier.top().priority < best - tol) break;
    Item item = frontier.top();
    frontier.pop();
    const CenterCode original = sorted_vertex_code(item.v, q.sigma, p);
    if (map.contains(original)) {
      candidates.push_back(original);
      best = std::max(best, item.priority);
    }
    for (auto& s : basic_successors(item.v)) {
      if (!visited.insert(encode(s, p).key()).second) continue;
      const double priority = inner_product(q.x, s);
      frontier.push({priority, std::move(s)});
    }
  }
  if (candidates.empty()) throw InputError("no labeled center reachable");
  return pick_winner<T>(candidates, w, map, tol);
}

}  // namespace detail

/// Labeled center with the highest cosine similarity to w. All strategies
/// agree whenever the optimum is unique; exact ties are flagged.
template <std::floating_point T>
Prediction closest_labeled(std::span<const T> w, const LabelMap& map, SearchStrategy strategy) {
  if (map.empty()) throw InputError("labeled search over an empty label map");
  const SystemParams& p = map.params();
  if (w.size() != p.n) throw InputError("query dimension does not match the label map");
  bool nonzero = false;
  for (auto v : w) {
    if (!std::isfinite(v)) throw InputError("query has a non-finite coordinate");
    nonzero |= (v != T(0));
  }
  if (!nonzero) throw InputError("query has zero norm");
  const double tol = detail::score_tolerance(w, p);
  switch (strategy) {
    case SearchStrategy::kBruteForce: return detail::search_brute_force(w, map, tol);
    case SearchStrategy::kDfs: return detail::search_dfs(w, map, tol);
    case SearchStrategy::kBestFirst: return detail::search_best_first(w, map, tol);
  }
  throw ParameterError("unknown search strategy");
}

template <std::floating_point T>
Prediction closest_labeled(const std::vector<T>& w, const LabelMap& map, SearchStrategy strategy) {
  return closest_labeled(std::span<const T>(w), map, strategy);
}

/// Closest-center prediction falling back to `strategy` when the closest
/// center is unlabeled, so every row gets a label.
inline std::vector<Prediction> predict_labeled(const EmbeddingBatch& batch, const LabelMap& map,
                                               SearchStrategy strategy) {
  std::vector<Prediction> out = predict(batch, map);
  for (std::size_t i = 0; i < out.size(); ++i)
    if (out[i].label == kUnlabeled) out[i] = closest_labeled(batch.row(i), map, strategy);
  return out;
}

}  // namespace lsc

#endif  // LSC_LABELED_SEARCH_HPP
