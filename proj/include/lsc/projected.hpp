#ifndef LSC_PROJECTED_HPP
#define LSC_PROJECTED_HPP

// Projected systems: dropping the last coordinate of V_{n+1}^{mk} yields the
// disjoint union V_n^{mk} + V_n^{(m-1)k} + V_n^{m(k-1)} at dimension n. The
// closest member of the union is found by running the constant-time search on
// each part and comparing the candidates by cosine similarity (the parts have
// different norms, so raw inner products are not comparable).

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lsc/closest_center.hpp"
#include "lsc/label_map.hpp"
#include "lsc/labeled_search.hpp"
#include "lsc/vector_system.hpp"

namespace lsc {

/// Subsystem slots in tie-break precedence order.
enum class Subsystem : std::uint8_t { kFull = 0, kFewerOnes = 1, kFewerNegOnes = 2 };

inline constexpr std::size_t kSubsystemCount = 3;

struct ProjectedParams {
  SystemParams base;                                          // V_{n+1}^{mk}
  std::array<std::optional<SystemParams>, kSubsystemCount> parts;  // at dimension n; empty when the part has no vectors

  std::uint32_t dim() const { return base.n - 1; }

  std::uint64_t total_vectors() const {
    std::uint64_t total = 0;
    for (const auto& p : parts)
      if (p) total += count_vectors(*p);
    return total;
  }
};

/// Describes pi_n(V_{n+1}^{mk}) for base = (n+1, m, k).
inline ProjectedParams project(const SystemParams& base) {
  base.validate();
  if (base.n < 2) throw ParameterError("projection needs a base dimension of at least 2");
  const std::uint32_t n = base.n - 1, m = base.m, k = base.k;
  ProjectedParams out{base, {}};
  // Last base coordinate 0, +1 or -1 respectively.
  const std::array<std::pair<std::int64_t, std::int64_t>, kSubsystemCount> counts{
      {{m, k}, {std::int64_t(m) - 1, k}, {m, std::int64_t(k) - 1}}};
  for (std::size_t s = 0; s < kSubsystemCount; ++s) {
    const auto [mm, kk] = counts[s];
    if (mm < 0 || kk < 0 || mm + kk > n) continue;  // no base vector lands here
    if (mm + kk == 0)
      throw ParameterError("projection produces the zero vector (m + k = 1); the union is degenerate");
    out.parts[s] = SystemParams(n, static_cast<std::uint32_t>(mm), static_cast<std::uint32_t>(kk));
  }
  if (out.total_vectors() != count_vectors(base)) throw ParameterError("projected parts do not partition the base system");
  return out;
}

/// Drops the last coordinate.
inline CenterVector project_vector(const CenterVector& v) {
  if (v.size() < 2) throw DomainError("cannot project a vector of length < 2");
  return CenterVector{std::vector<std::int8_t>(v.coords.begin(), v.coords.end() - 1)};
}

/// Per-subsystem label maps sharing one label-id space.
class ProjectedLabelMap {
 public:
  ProjectedLabelMap(ProjectedParams params, std::array<std::optional<LabelMap>, kSubsystemCount> maps)
      : params_(std::move(params)), maps_(std::move(maps)) {
    std::vector<std::int64_t> seen;
    for (std::size_t s = 0; s < kSubsystemCount; ++s) {
      if (!maps_[s]) continue;
      if (!params_.parts[s] || !(maps_[s]->params() == *params_.parts[s]))
        throw ConstructionError("subsystem label map does not match the projected parameters");
      for (const auto& e : maps_[s]->entries()) seen.push_back(e.label);
    }
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
      throw ConstructionError("label ids must be unique across subsystems");
    n_classes_ = seen.size();
  }

  const ProjectedParams& params() const { return params_; }
  const std::optional<LabelMap>& part(std::size_t s) const { return maps_[s]; }
  std::uint64_t n_classes() const { return n_classes_; }

 private:
  ProjectedParams params_;
  std::array<std::optional<LabelMap>, kSubsystemCount> maps_;
  std::uint64_t n_classes_ = 0;
};

/// Every union member in canonical order: subsystem precedence, then
/// lexicographic (maxes, mins) within a subsystem.
struct UnionMember {
  Subsystem part;
  CenterCode code;
};

inline std::vector<UnionMember> union_members(const ProjectedParams& pp) {
  std::vector<UnionMember> out;
  out.reserve(pp.total_vectors());
  for (std::size_t s = 0; s < kSubsystemCount; ++s) {
    if (!pp.parts[s]) continue;
    CodeEnumerator it(*pp.parts[s]);
    CenterCode c;
    while (it.next(c)) out.push_back({static_cast<Subsystem>(s), c});
  }
  return out;
}

/// Labels 0..n_classes-1 assigned to the first n_classes union members.
inline ProjectedLabelMap canonical_projected_map(const ProjectedParams& pp, std::uint64_t n_classes) {
  if (n_classes > pp.total_vectors()) throw ParameterError("n_classes exceeds the union size");
  std::array<std::vector<CenterCode>, kSubsystemCount> codes;
  std::array<std::vector<std::int64_t>, kSubsystemCount> labels;
  std::uint64_t next = 0;
  for (std::size_t s = 0; s < kSubsystemCount && next < n_classes; ++s) {
    if (!pp.parts[s]) continue;
    CodeEnumerator it(*pp.parts[s]);
    CenterCode c;
    while (next < n_classes && it.next(c)) {
      codes[s].push_back(c);
      labels[s].push_back(static_cast<std::int64_t>(next++));
    }
  }
  std::array<std::optional<LabelMap>, kSubsystemCount> maps;
  for (std::size_t s = 0; s < kSubsystemCount; ++s)
    if (pp.parts[s]) maps[s].emplace(*pp.parts[s], std::move(codes[s]), labels[s]);
  return ProjectedLabelMap(pp, std::move(maps));
}

struct ProjectedPrediction {
  Prediction prediction;
  Subsystem part = Subsystem::kFull;
};

template <std::floating_point T>
ProjectedPrediction closest_in_union(std::span<const T> w, const ProjectedLabelMap& pmap) {
  const ProjectedParams& pp = pmap.params();
  if (w.size() != pp.dim())
    throw InputError("query has " + std::to_string(w.size()) + " coordinates, projected system has n=" +
                     std::to_string(pp.dim()));
  ProjectedPrediction best;
  double best_cos = -std::numeric_limits<double>::infinity();
  bool have = false;
  for (std::size_t s = 0; s < kSubsystemCount; ++s) {
    if (!pp.parts[s]) continue;
    const SystemParams& part = *pp.parts[s];
    const ClosestCode cc = closest_code(w, part);
    // ||w|| is common to all candidates and is left out.
    const double cos = signed_score(cc.code, w) / std::sqrt(static_cast<double>(part.m + part.k));
    if (!have || cos > best_cos) {
      best.prediction = Prediction{kUnlabeled, cc.code, cc.on_tie_boundary};
      best.part = static_cast<Subsystem>(s);
      best_cos = cos;
      have = true;
    } else if (cos == best_cos) {
      best.prediction.on_tie_boundary = true;  // earlier subsystem keeps precedence
    }
  }
  if (const auto& map = pmap.part(static_cast<std::size_t>(best.part)))
    best.prediction.label = map->find(best.prediction.code);
  return best;
}

template <std::floating_point T>
ProjectedPrediction closest_in_union(const std::vector<T>& w, const ProjectedLabelMap& pmap) {
  return closest_in_union(std::span<const T>(w), pmap);
}

inline std::vector<ProjectedPrediction> predict_projected(const EmbeddingBatch& batch, const ProjectedLabelMap& pmap) {
  if (batch.dim() != pmap.params().dim()) throw InputError("batch dimension does not match the projected system");
  std::vector<ProjectedPrediction> out;
  out.reserve(batch.rows());
  for (std::size_t i = 0; i < batch.rows(); ++i) out.push_back(closest_in_union(batch.row(i), pmap));
  return out;
}

}  // namespace lsc

#endif  // LSC_PROJECTED_HPP
