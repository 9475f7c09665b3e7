#ifndef LSC_TESTS_UTIL_HPP
#define LSC_TESTS_UTIL_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "brute.hpp"
#include "lsc/vector_system.hpp"

namespace testutil {

inline lsc::CenterVector to_center(const brute::Vec& v) {
  lsc::CenterVector c;
  for (int x : v) c.coords.push_back(static_cast<std::int8_t>(x));
  return c;
}

inline brute::Vec to_vec(const lsc::CenterVector& c) { return {c.coords.begin(), c.coords.end()}; }

/// Random subset of `all` with exactly `size` elements, order preserved.
template <typename T>
std::vector<T> sample_subset(const std::vector<T>& all, std::size_t size, std::mt19937_64& rng) {
  std::vector<std::size_t> idx(all.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(size);
  std::sort(idx.begin(), idx.end());
  std::vector<T> out;
  for (auto i : idx) out.push_back(all[i]);
  return out;
}

}  // namespace testutil

#endif
