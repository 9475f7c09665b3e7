// Minimal end-to-end use: label part of a system, predict a few noisy rows,
// and fall back to the closest labeled center when the hit is unlabeled.

#include <iostream>
#include <random>

#include "lsc/lsc.hpp"

int main() {
  const lsc::SystemParams params(lsc::choose_min_dim(1000, 2, 2), 2, 2);
  const lsc::LabelMap map = lsc::canonical_label_map(params, 1000);
  std::cout << "n=" << params.n << " n_vects=" << map.n_vects() << " k_l=" << map.label_coefficient() << '\n';

  std::mt19937_64 rng(1);
  std::normal_distribution<float> noise(0.0f, 0.4f);
  std::vector<float> rows;
  for (std::int64_t label : {3, 500, 999}) {
    const auto center = lsc::decode(*map.code_for_label(label), params);
    for (auto c : center.coords) rows.push_back(static_cast<float>(c) + noise(rng));
  }
  const lsc::EmbeddingBatch batch(params.n, rows);

  const auto fast = lsc::predict(batch, map);
  const auto full = lsc::predict_labeled(batch, map, lsc::SearchStrategy::kBestFirst);
  for (std::size_t i = 0; i < fast.size(); ++i)
    std::cout << "row " << i << ": closest-center label " << fast[i].label << ", closest labeled " << full[i].label
              << '\n';
}
