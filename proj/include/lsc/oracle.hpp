#ifndef LSC_ORACLE_HPP
#define LSC_ORACLE_HPP

// Exact reference classifiers whose cost grows linearly with the number of
// centers: a dense cosine-similarity scan (the conventional baseline that is
// timed against the constant-time search), a matmul-style classifier head, and
// a signed-index scan that evaluates the same cosine similarity using only the
// nonzero coordinates of each center.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "lsc/closest_center.hpp"
#include "lsc/label_map.hpp"
#include "lsc/projected.hpp"
#include "lsc/vector_system.hpp"

namespace lsc {

/// Dense center rows with their labels; rows may carry kUnlabeled.
class CenterMatrix {
 public:
  CenterMatrix() = default;

  CenterMatrix(std::size_t dim, std::span<const CenterVector> rows, std::vector<std::int64_t> labels)
      : dim_(dim), labels_(std::move(labels)) {
    if (rows.size() != labels_.size()) throw InputError("center and label counts differ");
    values_.resize(rows.size() * dim_);
    inv_norms_.resize(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != dim_) throw InputError("center row has the wrong dimension");
      double sq = 0;
      for (std::size_t d = 0; d < dim_; ++d) {
        values_[r * dim_ + d] = rows[r].coords[d];
        sq += rows[r].coords[d] * rows[r].coords[d];
      }
      if (sq == 0) throw InputError("center row has zero norm");
      inv_norms_[r] = 1.0 / std::sqrt(sq);
    }
  }

  /// Row i holds the center of the i-th smallest label.
  static CenterMatrix from_label_map(const LabelMap& map) {
    std::vector<CenterVector> rows;
    std::vector<std::int64_t> labels;
    rows.reserve(map.n_classes());
    labels.reserve(map.n_classes());
    for (std::size_t idx : map.label_order()) {
      const auto& e = map.entries()[idx];
      rows.push_back(decode(e.code, map.params()));
      labels.push_back(e.label);
    }
    return CenterMatrix(map.params().n, rows, std::move(labels));
  }

  /// Every member of the system in canonical order, labeled through `map`
  /// where present and kUnlabeled otherwise.
  static CenterMatrix from_system(const LabelMap& map) {
    std::vector<CenterVector> rows;
    std::vector<std::int64_t> labels;
    CodeEnumerator it(map.params());
    CenterCode c;
    while (it.next(c)) {
      rows.push_back(decode(c, map.params()));
      labels.push_back(map.find(c));
    }
    return CenterMatrix(map.params().n, rows, std::move(labels));
  }

  static CenterMatrix from_union(const ProjectedLabelMap& pmap) {
    std::vector<CenterVector> rows;
    std::vector<std::int64_t> labels;
    for (const auto& u : union_members(pmap.params())) {
      const auto s = static_cast<std::size_t>(u.part);
      rows.push_back(decode(u.code, *pmap.params().parts[s]));
      labels.push_back(pmap.part(s) ? pmap.part(s)->find(u.code) : kUnlabeled);
    }
    return CenterMatrix(pmap.params().dim(), rows, std::move(labels));
  }

  std::size_t rows() const { return labels_.size(); }
  std::size_t dim() const { return dim_; }
  std::span<const float> row(std::size_t r) const { return {values_.data() + r * dim_, dim_}; }
  double inv_norm(std::size_t r) const { return inv_norms_[r]; }
  std::int64_t label(std::size_t r) const { return labels_[r]; }

 private:
  std::size_t dim_ = 0;
  std::vector<float> values_;
  std::vector<double> inv_norms_;
  std::vector<std::int64_t> labels_;
};

/// Bytes a CenterMatrix with `rows` rows of dimension `dim` occupies.
inline std::uint64_t estimate_center_matrix_bytes(std::uint64_t rows, std::uint64_t dim) {
  return rows * (dim * sizeof(float) + sizeof(double) + sizeof(std::int64_t));
}

struct OracleOptions {
  /// Centers per block; a block stays cache resident while every query of
  /// the batch is scored against it.
  std::size_t center_block = 512;
};

struct OracleHit {
  std::size_t row = 0;
  double score = -std::numeric_limits<double>::infinity();
  bool tie = false;  // another row reached the same score
};

namespace detail {

inline constexpr std::size_t kQueryLanes = 16;

inline void check_rows(const EmbeddingBatch& batch, std::size_t dim) {
  if (batch.dim() != dim) throw InputError("batch dimension does not match the centers");
  for (std::size_t i = 0; i < batch.rows(); ++i) {
    bool nonzero = false;
    for (float v : batch.row(i)) {
      if (!std::isfinite(v)) throw InputError("query has a non-finite coordinate");
      nonzero |= (v != 0.0f);
    }
    if (!nonzero) throw InputError("query " + std::to_string(i) + " has zero norm");
  }
}

// Queries as double, scaled to unit norm, transposed in groups of kQueryLanes:
// lane-major layout block[g][d][lane].
inline std::vector<double> transpose_queries(const EmbeddingBatch& batch, bool normalize) {
  const std::size_t groups = (batch.rows() + kQueryLanes - 1) / kQueryLanes, dim = batch.dim();
  std::vector<double> out(groups * dim * kQueryLanes, 0.0);
  for (std::size_t i = 0; i < batch.rows(); ++i) {
    auto row = batch.row(i);
    double scale = 1.0;
    if (normalize) {
      double sq = 0;
      for (float v : row) sq += static_cast<double>(v) * v;
      scale = 1.0 / std::sqrt(sq);
    }
    double* g = out.data() + (i / kQueryLanes) * dim * kQueryLanes;
    for (std::size_t d = 0; d < dim; ++d) g[d * kQueryLanes + i % kQueryLanes] = row[d] * scale;
  }
  return out;
}

// Running argmax for one group of query lanes, kept as parallel arrays so
// the per-center update is branch free.
struct LaneBest {
  double score[kQueryLanes];
  std::uint64_t row[kQueryLanes];
  std::uint64_t tie[kQueryLanes];  // same width as score so the update vectorizes

  LaneBest() {
    std::fill_n(score, kQueryLanes, -std::numeric_limits<double>::infinity());
    std::fill_n(row, kQueryLanes, std::uint64_t{0});
    std::fill_n(tie, kQueryLanes, std::uint64_t{0});
  }

  void update(const double* v, std::uint64_t r) {
    for (std::size_t l = 0; l < kQueryLanes; ++l) {
      const std::uint64_t gt = -static_cast<std::uint64_t>(v[l] > score[l]);
      const std::uint64_t eq = -static_cast<std::uint64_t>(v[l] == score[l]);
      score[l] = v[l] > score[l] ? v[l] : score[l];
      row[l] = (r & gt) | (row[l] & ~gt);
      tie[l] = (tie[l] | eq) & ~gt;
    }
  }

  void scale(double s) {
    for (double& v : score) v *= s;
  }
};

inline std::vector<OracleHit> collect(const std::vector<LaneBest>& lanes, std::size_t nq) {
  std::vector<OracleHit> hits(nq);
  for (std::size_t i = 0; i < nq; ++i) {
    const LaneBest& b = lanes[i / kQueryLanes];
    const std::size_t l = i % kQueryLanes;
    hits[i] = {static_cast<std::size_t>(b.row[l]), b.score[l], b.tie[l] != 0};
  }
  return hits;
}

// Four centers share each load of a query row; explicit vectors keep the
// accumulators in registers, which plain loops did not manage.
inline constexpr std::size_t kCenterTile = 4;
typedef double Lanes8 __attribute__((vector_size(64)));
static_assert(kQueryLanes == 16, "score_tile holds a lane group in two Lanes8");

inline void score_tile(const CenterMatrix& centers, const double* q, std::size_t c, std::size_t count, bool cosine,
                       LaneBest& best) {
  const std::size_t dim = centers.dim();
  Lanes8 acc[kCenterTile][2] = {};
  const float* rows[kCenterTile];
  for (std::size_t r = 0; r < kCenterTile; ++r) rows[r] = centers.row(c + std::min(r, count - 1)).data();
  for (std::size_t d = 0; d < dim; ++d) {
    Lanes8 lo, hi;
    std::memcpy(&lo, q + d * kQueryLanes, sizeof lo);
    std::memcpy(&hi, q + d * kQueryLanes + 8, sizeof hi);
    for (std::size_t r = 0; r < kCenterTile; ++r) {
      const double cv = rows[r][d];
      acc[r][0] += cv * lo;
      acc[r][1] += cv * hi;
    }
  }
  for (std::size_t r = 0; r < count; ++r) {
    double v[kQueryLanes];
    std::memcpy(v, acc[r], sizeof v);
    const double s = cosine ? centers.inv_norm(c + r) : 1.0;
    for (double& x : v) x *= s;
    best.update(v, c + r);
  }
}

inline std::vector<OracleHit> dense_scan(const EmbeddingBatch& batch, const CenterMatrix& centers, bool cosine,
                                         const OracleOptions& opt) {
  check_rows(batch, centers.dim());
  const std::size_t dim = centers.dim(), nq = batch.rows();
  const std::size_t groups = (nq + kQueryLanes - 1) / kQueryLanes;
  const std::vector<double> qt = transpose_queries(batch, cosine);
  std::vector<LaneBest> lanes(groups);
  const std::size_t block = std::max<std::size_t>(1, opt.center_block);
  for (std::size_t c0 = 0; c0 < centers.rows(); c0 += block) {
    const std::size_t c1 = std::min(centers.rows(), c0 + block);
    for (std::size_t g = 0; g < groups; ++g) {
      const double* q = qt.data() + g * dim * kQueryLanes;
      LaneBest& best = lanes[g];
      std::size_t c = c0;
      for (; c + kCenterTile <= c1; c += kCenterTile) score_tile(centers, q, c, kCenterTile, cosine, best);
      if (c < c1) score_tile(centers, q, c, c1 - c, cosine, best);
    }
  }
  return collect(lanes, nq);
}

}  // namespace detail

/// Per query, the center row with the highest cosine similarity; the lowest
/// row index wins exact ties.
inline std::vector<OracleHit> cossim_argmax_rows(const EmbeddingBatch& batch, const CenterMatrix& centers,
                                                 const OracleOptions& opt = {}) {
  if (centers.rows() == 0) throw InputError("oracle needs at least one center");
  return detail::dense_scan(batch, centers, true, opt);
}

inline std::vector<std::int64_t> cossim_argmax(const EmbeddingBatch& batch, const CenterMatrix& centers,
                                               const OracleOptions& opt = {}) {
  std::vector<std::int64_t> out;
  for (const auto& h : cossim_argmax_rows(batch, centers, opt)) out.push_back(centers.label(h.row));
  return out;
}

/// Argmax of raw inner products, as a fully connected classifier head would
/// compute it. Equals cossim_argmax whenever all centers share one norm.
inline std::vector<std::int64_t> matmul_head_argmax(const EmbeddingBatch& batch, const CenterMatrix& centers,
                                                    const OracleOptions& opt = {}) {
  if (centers.rows() == 0) throw InputError("oracle needs at least one center");
  std::vector<std::int64_t> out;
  for (const auto& h : detail::dense_scan(batch, centers, false, opt)) out.push_back(centers.label(h.row));
  return out;
}

/// Centers of one system stored as index lists; <v, w> costs m + k loads.
class SignedCenterList {
 public:
  SignedCenterList(const SystemParams& params, std::span<const CenterCode> codes, std::vector<std::int64_t> labels)
      : params_(params), labels_(std::move(labels)) {
    if (codes.size() != labels_.size()) throw InputError("center and label counts differ");
    const std::size_t width = params_.m + params_.k;
    idx_.reserve(codes.size() * width);
    for (const auto& c : codes) {
      if (!c.valid_for(params_)) throw InputError("center code does not match the system");
      for (auto i : c.maxes()) idx_.push_back(i);
      for (auto i : c.mins()) idx_.push_back(i);
    }
  }

  static SignedCenterList from_label_map(const LabelMap& map) {
    std::vector<CenterCode> codes;
    std::vector<std::int64_t> labels;
    for (std::size_t idx : map.label_order()) {
      codes.push_back(map.entries()[idx].code);
      labels.push_back(map.entries()[idx].label);
    }
    return SignedCenterList(map.params(), codes, std::move(labels));
  }

  /// Whole system in canonical order, kUnlabeled where `map` has no entry.
  static SignedCenterList from_system(const LabelMap& map) {
    std::vector<CenterCode> codes = enumerate_codes(map.params());
    std::vector<std::int64_t> labels;
    labels.reserve(codes.size());
    for (const auto& c : codes) labels.push_back(map.find(c));
    return SignedCenterList(map.params(), codes, std::move(labels));
  }

  const SystemParams& params() const { return params_; }
  std::size_t rows() const { return labels_.size(); }
  std::span<const std::uint16_t> indexes() const { return idx_; }
  std::int64_t label(std::size_t r) const { return labels_[r]; }

  CenterCode code(std::size_t r) const {
    const std::uint16_t* p = idx_.data() + r * (params_.m + params_.k);
    return CenterCode::unchecked(p, params_.m, p + params_.m, params_.k);
  }

 private:
  SystemParams params_;
  std::vector<std::uint16_t> idx_;
  std::vector<std::int64_t> labels_;
};

/// Same contract as cossim_argmax_rows, scanning a SignedCenterList.
inline std::vector<OracleHit> cossim_argmax_rows(const EmbeddingBatch& batch, const SignedCenterList& centers,
                                                 const OracleOptions& opt = {}) {
  using detail::kQueryLanes;
  if (centers.rows() == 0) throw InputError("oracle needs at least one center");
  const SystemParams& p = centers.params();
  detail::check_rows(batch, p.n);
  const std::size_t nq = batch.rows(), dim = p.n, m = p.m, width = p.m + p.k;
  const std::size_t groups = (nq + kQueryLanes - 1) / kQueryLanes;
  const std::vector<double> qt = detail::transpose_queries(batch, true);
  const double inv = 1.0 / std::sqrt(static_cast<double>(width));
  const std::uint16_t* idx = centers.indexes().data();
  std::vector<detail::LaneBest> lanes(groups);
  const std::size_t block = std::max<std::size_t>(1, opt.center_block) * 8;
  for (std::size_t c0 = 0; c0 < centers.rows(); c0 += block) {
    const std::size_t c1 = std::min(centers.rows(), c0 + block);
    for (std::size_t g = 0; g < groups; ++g) {
      const double* q = qt.data() + g * dim * kQueryLanes;
      detail::LaneBest& best = lanes[g];
      for (std::size_t c = c0; c < c1; ++c) {
        const std::uint16_t* ci = idx + c * width;
        double acc[kQueryLanes] = {};
        for (std::size_t j = 0; j < m; ++j)
          for (std::size_t l = 0; l < kQueryLanes; ++l) acc[l] += q[ci[j] * kQueryLanes + l];
        for (std::size_t j = m; j < width; ++j)
          for (std::size_t l = 0; l < kQueryLanes; ++l) acc[l] -= q[ci[j] * kQueryLanes + l];
        best.update(acc, c);
      }
    }
  }
  // Every center has the same norm, so scores are compared unscaled.
  for (auto& b : lanes) b.scale(inv);
  return detail::collect(lanes, nq);
}

inline std::vector<std::int64_t> cossim_argmax(const EmbeddingBatch& batch, const SignedCenterList& centers,
                                               const OracleOptions& opt = {}) {
  std::vector<std::int64_t> out;
  for (const auto& h : cossim_argmax_rows(batch, centers, opt)) out.push_back(centers.label(h.row));
  return out;
}

}  // namespace lsc

#endif  // LSC_ORACLE_HPP
