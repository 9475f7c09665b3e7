#include <gtest/gtest.h>

#include <random>

#include "lsc/oracle.hpp"
#include "support/brute.hpp"
#include "support/util.hpp"

using namespace lsc;

namespace {

EmbeddingBatch random_batch(std::mt19937_64& rng, int rows, int n, double scale = 1.0) {
  std::vector<float> v;
  for (int i = 0; i < rows; ++i)
    for (double x : brute::gaussian(rng, n)) v.push_back(static_cast<float>(x * scale));
  return EmbeddingBatch(n, std::move(v));
}

EmbeddingBatch centers_as_batch(const CenterMatrix& c) {
  std::vector<float> v;
  for (std::size_t r = 0; r < c.rows(); ++r)
    for (float x : c.row(r)) v.push_back(x);
  return EmbeddingBatch(c.dim(), std::move(v));
}

}  // namespace

TEST(Oracle, CentersLabelThemselves) {
  auto map = canonical_label_map(SystemParams(8, 2, 2), 300);
  auto centers = CenterMatrix::from_label_map(map);
  ASSERT_EQ(centers.rows(), 300u);
  auto labels = cossim_argmax(centers_as_batch(centers), centers);
  for (std::size_t r = 0; r < labels.size(); ++r) EXPECT_EQ(labels[r], static_cast<std::int64_t>(r));
}

TEST(Oracle, RowsFollowLabels) {
  const SystemParams p(6, 2, 2);
  auto codes = enumerate_codes(p);
  LabelMap map(p, {codes[5], codes[2], codes[9]}, std::vector<std::int64_t>{2, 0, 1});
  auto c = CenterMatrix::from_label_map(map);
  EXPECT_EQ(c.label(0), 0);
  EXPECT_EQ(decode(codes[2], p).coords, std::vector<std::int8_t>(c.row(0).begin(), c.row(0).end()));
  EXPECT_EQ(decode(codes[5], p).coords, std::vector<std::int8_t>(c.row(2).begin(), c.row(2).end()));
}

TEST(Oracle, MatchesNaiveScan) {
  std::mt19937_64 rng(31);
  const SystemParams p(8, 2, 2);
  auto map = canonical_label_map(p, 250);
  auto centers = CenterMatrix::from_label_map(map);
  std::vector<brute::Vec> vecs;
  for (std::size_t r = 0; r < centers.rows(); ++r) vecs.emplace_back(centers.row(r).begin(), centers.row(r).end());
  auto b = random_batch(rng, 333, 8);
  auto hits = cossim_argmax_rows(b, centers);
  for (std::size_t i = 0; i < b.rows(); ++i) {
    std::vector<double> w(b.row(i).begin(), b.row(i).end());
    auto best = brute::argmax_cosine(w, vecs);
    if (best.tie) continue;
    EXPECT_EQ(hits[i].row, best.index);
    EXPECT_NEAR(hits[i].score, best.score, 1e-9);
  }
}

TEST(Oracle, ScaleInvariant) {
  std::mt19937_64 rng(32), rng2(32);
  auto centers = CenterMatrix::from_label_map(canonical_label_map(SystemParams(9, 2, 2), 500));
  auto a = cossim_argmax(random_batch(rng, 200, 9), centers);
  auto b = cossim_argmax(random_batch(rng2, 200, 9, 64.0), centers);
  EXPECT_EQ(a, b);
}

TEST(Oracle, MatmulEqualsCossimOnOneSystem) {
  std::mt19937_64 rng(33);
  auto centers = CenterMatrix::from_label_map(canonical_label_map(SystemParams(9, 2, 2), 700));
  auto b = random_batch(rng, 300, 9);
  EXPECT_EQ(matmul_head_argmax(b, centers), cossim_argmax(b, centers));
}

TEST(Oracle, SingleClass) {
  std::mt19937_64 rng(34);
  auto centers = CenterMatrix::from_label_map(canonical_label_map(SystemParams(6, 2, 2), 1));
  for (auto l : matmul_head_argmax(random_batch(rng, 50, 6), centers)) EXPECT_EQ(l, 0);
}

TEST(Oracle, MixedNormsCanDisagree) {
  // (1,1) has norm sqrt2, (1,0) norm 1; w = (1, 0.3).
  std::vector<CenterVector> rows{testutil::to_center({1, 1}), testutil::to_center({1, 0})};
  CenterMatrix c(2, rows, {0, 1});
  EmbeddingBatch b(2, {1.0f, 0.3f});
  EXPECT_EQ(matmul_head_argmax(b, c)[0], 0);
  EXPECT_EQ(cossim_argmax(b, c)[0], 1);
}

TEST(Oracle, SparseScanMatchesDense) {
  std::mt19937_64 rng(35);
  auto map = canonical_label_map(SystemParams(11, 2, 2), 1500);
  auto dense = CenterMatrix::from_label_map(map);
  auto sparse = SignedCenterList::from_label_map(map);
  auto b = random_batch(rng, 400, 11);
  auto d = cossim_argmax_rows(b, dense), s = cossim_argmax_rows(b, sparse);
  for (std::size_t i = 0; i < d.size(); ++i) {
    EXPECT_EQ(dense.label(d[i].row), sparse.label(s[i].row));
    EXPECT_NEAR(d[i].score, s[i].score, 1e-12);
  }
  auto full = CenterMatrix::from_system(map);
  EXPECT_EQ(full.rows(), count_vectors(map.params()));
  EXPECT_EQ(SignedCenterList::from_system(map).rows(), full.rows());
}

TEST(Oracle, BlockSizeDoesNotChangeResult) {
  std::mt19937_64 rng(36);
  auto centers = CenterMatrix::from_label_map(canonical_label_map(SystemParams(8, 2, 2), 400));
  auto b = random_batch(rng, 37, 8);
  EXPECT_EQ(cossim_argmax(b, centers, {1}), cossim_argmax(b, centers, {10000}));
}

TEST(Oracle, ExactTiesFlaggedLowestRowWins) {
  std::vector<CenterVector> rows{testutil::to_center({1, 0, -1}), testutil::to_center({1, -1, 0})};
  CenterMatrix c(3, rows, {0, 1});
  auto h = cossim_argmax_rows(EmbeddingBatch(3, {1.0f, -1.0f, -1.0f}), c);
  EXPECT_TRUE(h[0].tie);
  EXPECT_EQ(h[0].row, 0u);
}

TEST(Oracle, Errors) {
  auto centers = CenterMatrix::from_label_map(canonical_label_map(SystemParams(4, 2, 2), 3));
  EXPECT_THROW(cossim_argmax(EmbeddingBatch(4, {0, 0, 0, 0}), centers), InputError);
  EXPECT_THROW(cossim_argmax(EmbeddingBatch(3, {1, 0, 0}), centers), InputError);
  EXPECT_THROW(cossim_argmax(EmbeddingBatch(4, {1, 0, 0, 0}), CenterMatrix()), InputError);
}
