#include <gtest/gtest.h>

#include <random>
#include <set>

#include "lsc/oracle.hpp"
#include "lsc/projected.hpp"
#include "support/brute.hpp"
#include "support/util.hpp"

using namespace lsc;
using testutil::to_center;
using testutil::to_vec;

namespace {

// The union built independently: every base vector with its last coordinate dropped.
std::vector<brute::Vec> projected_union(int base_n, int m, int k) {
  std::vector<brute::Vec> out;
  for (auto v : brute::materialize(base_n, m, k)) {
    v.pop_back();
    out.push_back(v);
  }
  return out;
}

}  // namespace

TEST(Project, PartsAndTotals) {
  auto pp = project(SystemParams(4, 1, 1));
  EXPECT_EQ(pp.dim(), 3u);
  ASSERT_TRUE(pp.parts[0] && pp.parts[1] && pp.parts[2]);
  EXPECT_EQ(count_vectors(*pp.parts[0]), 6u);
  EXPECT_EQ(count_vectors(*pp.parts[1]), 3u);
  EXPECT_EQ(count_vectors(*pp.parts[2]), 3u);
  EXPECT_EQ(pp.total_vectors(), 12u);

  auto p5 = project(SystemParams(5, 2, 2));
  EXPECT_EQ(count_vectors(*p5.parts[0]), 6u);
  EXPECT_EQ(count_vectors(*p5.parts[1]), 12u);
  EXPECT_EQ(count_vectors(*p5.parts[2]), 12u);
  EXPECT_EQ(p5.total_vectors(), 30u);
}

TEST(Project, DegenerateParts) {
  // m + k = n + 1: no base vector has a zero last coordinate.
  auto pp = project(SystemParams(4, 2, 2));
  EXPECT_FALSE(pp.parts[0]);
  EXPECT_EQ(pp.total_vectors(), 6u);
  auto only_ones = project(SystemParams(5, 2, 0));
  EXPECT_FALSE(only_ones.parts[2]);
  EXPECT_EQ(only_ones.total_vectors(), 10u);
  EXPECT_THROW(project(SystemParams(4, 1, 0)), ParameterError);
  EXPECT_THROW(project(SystemParams(1, 1, 0)), ParameterError);
}

TEST(Project, UnionIsBijectiveImage) {
  for (auto [n, m, k] : {std::tuple{4, 1, 1}, {5, 2, 2}, {6, 2, 1}, {7, 2, 2}, {8, 3, 2}}) {
    auto pp = project(SystemParams(n, m, k));
    std::multiset<brute::Vec> mine, ref;
    for (auto& u : union_members(pp)) mine.insert(to_vec(decode(u.code, *pp.parts[std::size_t(u.part)])));
    for (auto& v : projected_union(n, m, k)) ref.insert(v);
    EXPECT_EQ(mine, ref);
    EXPECT_EQ(mine.size(), count_vectors(SystemParams(n, m, k)));
    EXPECT_EQ(std::set<brute::Vec>(ref.begin(), ref.end()).size(), ref.size());
  }
}

TEST(Project, VectorProjection) {
  EXPECT_EQ(to_vec(project_vector(to_center({1, -1, 0, 1, 0}))), (brute::Vec{1, -1, 0, 1}));
}

TEST(ClosestInUnion, SelfIsClosest) {
  auto pp = project(SystemParams(7, 2, 2));
  auto pmap = canonical_projected_map(pp, pp.total_vectors());
  for (auto& u : union_members(pp)) {
    auto v = decode(u.code, *pp.parts[std::size_t(u.part)]);
    std::vector<double> w(v.coords.begin(), v.coords.end());
    auto r = closest_in_union(w, pmap);
    EXPECT_EQ(r.part, u.part);
    EXPECT_EQ(r.prediction.code, u.code);
    EXPECT_GE(r.prediction.label, 0);
  }
}

TEST(ClosestInUnion, MatchesBruteForce) {
  std::mt19937_64 rng(21);
  for (int n = 4; n <= 8; ++n) {
    auto pp = project(SystemParams(n, 2, 2));
    auto pmap = canonical_projected_map(pp, pp.total_vectors() / 2);
    auto all = projected_union(n, 2, 2);
    int compared = 0;
    for (int t = 0; t < 2000; ++t) {
      auto w = brute::gaussian(rng, n - 1);
      auto r = closest_in_union(w, pmap);
      auto best = brute::argmax_cosine(w, all);
      if (best.tie || r.prediction.on_tie_boundary) continue;
      ++compared;
      ASSERT_EQ(to_vec(decode(r.prediction.code, *pp.parts[std::size_t(r.part)])), all[best.index]);
    }
    EXPECT_GT(compared, 1500);
  }
}

TEST(ClosestInUnion, CosineNotRawInnerProduct) {
  // At n=3, (1,0,-1) has norm sqrt2 and (1,0,0) norm 1. For w = (1,0,-0.3)
  // the raw inner products are 1.3 vs 1, the cosines 0.919 vs 1 (times 1/|w|).
  auto pp = project(SystemParams(4, 1, 1));
  auto pmap = canonical_projected_map(pp, pp.total_vectors());
  const std::vector<double> w{1.0, 0.0, -0.3};
  auto r = closest_in_union(w, pmap);
  EXPECT_EQ(r.part, Subsystem::kFewerNegOnes);
  EXPECT_EQ(to_vec(decode(r.prediction.code, *pp.parts[2])), (brute::Vec{1, 0, 0}));

  auto centers = CenterMatrix::from_union(pmap);
  EmbeddingBatch b(3, {1.0f, 0.0f, -0.3f});
  const auto raw = matmul_head_argmax(b, centers)[0];
  const auto cos = cossim_argmax(b, centers)[0];
  EXPECT_EQ(cos, r.prediction.label);
  EXPECT_NE(raw, cos);
  for (std::size_t r = 0; r < centers.rows(); ++r)
    if (centers.label(r) == raw) {
      EXPECT_EQ(brute::Vec(centers.row(r).begin(), centers.row(r).end()), (brute::Vec{1, 0, -1}));
    }
}

TEST(ClosestInUnion, CrossSubsystemTieUsesPrecedence) {
  // Base (3,2,1) has no full part at n=2; the other two have equal norms.
  // w = (1,0) scores 1 on (1,-1) and on (1,1).
  auto pp = project(SystemParams(3, 2, 1));
  ASSERT_FALSE(pp.parts[0]);
  auto pmap = canonical_projected_map(pp, pp.total_vectors());
  auto r = closest_in_union(std::vector<double>{1.0, 0.0}, pmap);
  EXPECT_TRUE(r.prediction.on_tie_boundary);
  EXPECT_EQ(r.part, Subsystem::kFewerOnes);
  EXPECT_EQ(to_vec(decode(r.prediction.code, *pp.parts[1])), (brute::Vec{1, -1}));
  auto again = closest_in_union(std::vector<double>{1.0, 0.0}, pmap);
  EXPECT_EQ(again.prediction.code, r.prediction.code);
}

TEST(ClosestInUnion, DimensionMismatch) {
  auto pmap = canonical_projected_map(project(SystemParams(5, 2, 2)), 10);
  EXPECT_THROW(closest_in_union(std::vector<double>{1, 0, 0}, pmap), InputError);
}

TEST(ProjectedLabelMap, SharedLabelSpace) {
  auto pp = project(SystemParams(5, 2, 2));
  auto pmap = canonical_projected_map(pp, 20);
  EXPECT_EQ(pmap.n_classes(), 20u);
  EXPECT_EQ(pmap.part(0)->n_classes(), 6u);
  EXPECT_EQ(pmap.part(1)->n_classes(), 12u);
  EXPECT_EQ(pmap.part(2)->n_classes(), 2u);

  std::array<std::optional<LabelMap>, kSubsystemCount> maps;
  maps[0] = LabelMap(*pp.parts[0], {enumerate_codes(*pp.parts[0])[0]}, std::vector<std::int64_t>{4});
  maps[1] = LabelMap(*pp.parts[1], {enumerate_codes(*pp.parts[1])[0]}, std::vector<std::int64_t>{4});
  EXPECT_THROW(ProjectedLabelMap(pp, maps), ConstructionError);
}
