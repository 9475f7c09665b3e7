#include <gtest/gtest.h>

#include <random>

#include "lsc/closest_center.hpp"
#include "lsc/label_map.hpp"
#include "support/brute.hpp"
#include "support/util.hpp"

using namespace lsc;
using testutil::to_center;
using testutil::to_vec;

namespace {

std::vector<std::int64_t> iota_labels(std::size_t n) {
  std::vector<std::int64_t> l(n);
  for (std::size_t i = 0; i < n; ++i) l[i] = static_cast<std::int64_t>(i);
  return l;
}

EmbeddingBatch batch_of(const std::vector<std::vector<double>>& rows) {
  std::vector<float> v;
  for (auto& r : rows)
    for (double x : r) v.push_back(static_cast<float>(x));
  return EmbeddingBatch(rows.front().size(), std::move(v));
}

}  // namespace

TEST(LabelMap, Coefficients) {
  const SystemParams p(4, 2, 2);
  auto all = enumerate(p);
  LabelMap full = build_label_map(p, std::span<const CenterVector>(all), iota_labels(6));
  EXPECT_EQ(full.n_classes(), 6u);
  EXPECT_DOUBLE_EQ(full.label_coefficient(), 1.0);

  std::vector<CenterVector> three(all.begin(), all.begin() + 3);
  LabelMap half = build_label_map(p, std::span<const CenterVector>(three), iota_labels(3));
  EXPECT_DOUBLE_EQ(half.label_coefficient(), 0.5);
  EXPECT_EQ(half.n_unlabeled(), 3u);

  LabelMap big = canonical_label_map(SystemParams(10, 2, 2), 1000);
  EXPECT_EQ(big.n_vects(), 1260u);
  EXPECT_DOUBLE_EQ(big.label_coefficient(), 1000.0 / 1260.0);
}

TEST(LabelMap, ConstructionErrors) {
  const SystemParams p(4, 2, 2);
  auto codes = enumerate_codes(p);
  EXPECT_THROW(LabelMap(p, {codes[0], codes[0]}, std::vector<std::int64_t>{0, 1}), ConstructionError);
  EXPECT_THROW(LabelMap(p, {codes[0], codes[1]}, std::vector<std::int64_t>{3, 3}), ConstructionError);
  EXPECT_THROW(LabelMap(p, {codes[0]}, std::vector<std::int64_t>{-2}), ConstructionError);
  EXPECT_THROW(LabelMap(p, {codes[0]}, std::vector<std::int64_t>{0, 1}), ConstructionError);
  EXPECT_THROW(LabelMap(p, {CenterCode({0, 1}, {2})}, std::vector<std::int64_t>{0}), ConstructionError);
  EXPECT_THROW(canonical_label_map(p, 7), ParameterError);
}

TEST(LabelMap, LookupMatchesEntries) {
  std::mt19937_64 rng(3);
  const SystemParams p(9, 2, 2);
  auto codes = enumerate_codes(p);
  auto chosen = testutil::sample_subset(codes, 200, rng);
  std::vector<std::int64_t> labels(chosen.size());
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = static_cast<std::int64_t>(1000 + 7 * i);
  LabelMap map(p, chosen, labels);
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    EXPECT_EQ(map.find(chosen[i]), labels[i]);
    EXPECT_EQ(*map.code_for_label(labels[i]), chosen[i]);
  }
  std::size_t unlabeled = 0;
  for (auto& c : codes) unlabeled += !map.contains(c);
  EXPECT_EQ(unlabeled, codes.size() - chosen.size());
  EXPECT_EQ(map.code_for_label(5), nullptr);
}

TEST(ClosestCode, SelfIsClosest) {
  for (auto p : {SystemParams(6, 2, 2), SystemParams(7, 3, 1), SystemParams(5, 0, 2)}) {
    for (auto& v : enumerate(p)) {
      std::vector<double> w(v.coords.begin(), v.coords.end());
      auto cc = closest_code(w, p);
      EXPECT_EQ(decode(cc.code, p), v);
      EXPECT_FALSE(cc.on_tie_boundary);
    }
  }
}

TEST(ClosestCode, SmallExamples) {
  const SystemParams p(4, 1, 1);
  auto cc = closest_code(std::vector<double>{0.9, 0.1, -0.2, -0.7}, p);
  EXPECT_EQ(to_vec(decode(cc.code, p)), (brute::Vec{1, 0, 0, -1}));
  EXPECT_FALSE(cc.on_tie_boundary);
  // The oracle agrees.
  auto all = brute::materialize(4, 1, 1);
  EXPECT_EQ(all[brute::argmax_cosine(std::vector<double>{0.9, 0.1, -0.2, -0.7}, all).index],
            (brute::Vec{1, 0, 0, -1}));

  auto tie = closest_code(std::vector<double>{0.5, 0.5, -0.1, -0.3}, p);
  EXPECT_TRUE(tie.on_tie_boundary);
  EXPECT_EQ(to_vec(decode(tie.code, p)), (brute::Vec{1, 0, 0, -1}));
}

TEST(ClosestCode, OverlappingThresholds) {
  // Every coordinate equal: both selections compete for the same indexes.
  const SystemParams p(4, 2, 2);
  auto cc = closest_code(std::vector<double>{1, 1, 1, 1}, p);
  EXPECT_TRUE(cc.on_tie_boundary);
  EXPECT_TRUE(is_member(decode(cc.code, p), p));
  EXPECT_EQ(to_vec(decode(cc.code, p)), (brute::Vec{1, 1, -1, -1}));
}

TEST(ClosestCode, InputErrors) {
  const SystemParams p(4, 1, 1);
  EXPECT_THROW(closest_code(std::vector<double>{0, 0, 0, 0}, p), InputError);
  EXPECT_THROW(closest_code(std::vector<double>{1, 0, 0}, p), InputError);
  EXPECT_THROW(closest_code(std::vector<double>{1, NAN, 0, 0}, p), InputError);
  EXPECT_THROW(closest_code(std::vector<float>{1, INFINITY, 0, 0}, p), InputError);
}

TEST(ClosestCode, AgreesWithBruteForceOnSmallSystems) {
  std::mt19937_64 rng(11);
  for (auto [n, m, k] : {std::tuple{6, 2, 2}, {7, 1, 2}, {8, 3, 1}, {5, 0, 3}, {6, 2, 0}}) {
    const SystemParams p(n, m, k);
    auto all = brute::materialize(n, m, k);
    for (int t = 0; t < 2000; ++t) {
      auto w = brute::gaussian(rng, n);
      auto cc = closest_code(w, p);
      auto best = brute::argmax_cosine(w, all);
      if (cc.on_tie_boundary || best.tie) continue;
      ASSERT_EQ(to_vec(decode(cc.code, p)), all[best.index]);
    }
  }
}

TEST(ClosestCode, StrictGapsMeanNoTieFlag) {
  std::mt19937_64 rng(5);
  const SystemParams p(10, 2, 2);
  for (int t = 0; t < 500; ++t) {
    auto w = brute::gaussian(rng, 10);
    EXPECT_FALSE(closest_code(w, p).on_tie_boundary);
  }
}

TEST(Predict, OwnCentersGetOwnLabels) {
  const SystemParams p(6, 2, 2);
  auto map = canonical_label_map(p, count_vectors(p));
  std::vector<std::vector<double>> rows;
  for (auto& v : enumerate(p)) rows.emplace_back(v.coords.begin(), v.coords.end());
  auto preds = predict(batch_of(rows), map);
  for (std::size_t i = 0; i < preds.size(); ++i) {
    EXPECT_EQ(preds[i].label, static_cast<std::int64_t>(i));
    EXPECT_EQ(reconstruct_center(preds[i], p), decode(*map.code_for_label(preds[i].label), p));
  }
}

TEST(Predict, UnlabeledGivesSentinel) {
  const SystemParams p(4, 2, 2);
  auto map = canonical_label_map(p, 3);
  std::vector<std::vector<double>> rows;
  for (auto& v : enumerate(p)) rows.emplace_back(v.coords.begin(), v.coords.end());
  auto preds = predict(batch_of(rows), map);
  for (std::size_t i = 0; i < preds.size(); ++i) {
    EXPECT_EQ(preds[i].label, i < 3 ? static_cast<std::int64_t>(i) : kUnlabeled);
    EXPECT_EQ(preds[i].label >= 0, map.contains(preds[i].code));
  }
}

TEST(Predict, DimensionMismatch) {
  auto map = canonical_label_map(SystemParams(5, 2, 2), 3);
  EXPECT_THROW(predict(batch_of({{1, 0, 0, -1}}), map), InputError);
}

TEST(Predict, DeterministicAndParallelIdentical) {
  std::mt19937_64 rng(9);
  const SystemParams p(12, 2, 2);
  auto map = canonical_label_map(p, 2000);
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 3000; ++i) rows.push_back(brute::gaussian(rng, 12));
  rows.push_back({1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1});
  auto b = batch_of(rows);
  auto a1 = predict(b, map), a2 = predict(b, map), a3 = predict_parallel(b, map, 4);
  for (std::size_t i = 0; i < a1.size(); ++i) {
    EXPECT_EQ(a1[i].code, a2[i].code);
    EXPECT_EQ(a1[i].code, a3[i].code);
    EXPECT_EQ(a1[i].label, a3[i].label);
    EXPECT_EQ(a1[i].on_tie_boundary, a3[i].on_tie_boundary);
  }
}

TEST(Predict, ScaleInvariant) {
  std::mt19937_64 rng(13);
  const SystemParams p(9, 2, 2);
  for (int t = 0; t < 300; ++t) {
    auto w = brute::gaussian(rng, 9);
    auto s = w;
    for (auto& x : s) x *= 37.5;
    EXPECT_EQ(closest_code(w, p).code, closest_code(s, p).code);
  }
}
