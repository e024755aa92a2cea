#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "gpm/model.hpp"

namespace gpm {

// Saturating q^n.
inline std::uint64_t power_count(int q, std::size_t n) {
  std::uint64_t out = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (out > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(q))
      return std::numeric_limits<std::uint64_t>::max();
    out *= static_cast<std::uint64_t>(q);
  }
  return out;
}

// Saturating multinomial N! / prod n_k!.
inline std::uint64_t multinomial_count(const CountsVector& counts) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  __uint128_t out = 1;
  std::int64_t placed = 0;
  for (std::int64_t nk : counts.n) {
    // Running value is C(placed + i, i) times the previous factor; each step divides exactly.
    __uint128_t binom = 1;
    for (std::int64_t i = 1; i <= nk; ++i) {
      binom = binom * static_cast<std::uint64_t>(placed + i) / static_cast<std::uint64_t>(i);
      if (binom > kMax) return kMax;
    }
    out *= binom;
    if (out > kMax) return kMax;
    placed += nk;
  }
  return static_cast<std::uint64_t>(out);
}

// Base-q code of a coloring: vertex 0 is the least significant digit, colors
// contribute (c - 1).
inline std::uint64_t encode_configuration(const Configuration& sigma) {
  std::uint64_t code = 0;
  for (std::size_t v = sigma.size(); v-- > 0;) code = code * static_cast<std::uint64_t>(sigma.q()) + (sigma[v] - 1);
  return code;
}

inline std::vector<Color> decode_colors(std::uint64_t code, int q, std::size_t n) {
  std::vector<Color> colors(n);
  for (std::size_t v = 0; v < n; ++v) {
    colors[v] = static_cast<Color>(code % static_cast<std::uint64_t>(q) + 1);
    code /= static_cast<std::uint64_t>(q);
  }
  return colors;
}

// Visits every coloring of n vertices with exactly counts.n[k] vertices of
// color k + 1, in lexicographic order of the color vector.
template <typename Fn>
void for_each_coloring_with_counts(const CountsVector& counts, std::size_t n, Fn&& fn) {
  if (counts.total() != static_cast<std::int64_t>(n)) throw std::invalid_argument("color counts do not sum to N");
  std::vector<Color> colors;
  colors.reserve(n);
  for (int k = 0; k < counts.q(); ++k) colors.insert(colors.end(), static_cast<std::size_t>(counts.n[k]), Color(k + 1));
  do {
    fn(static_cast<const std::vector<Color>&>(colors));
  } while (std::next_permutation(colors.begin(), colors.end()));
}

// Visits all q^n colorings in code order.
template <typename Fn>
void for_each_coloring(int q, std::size_t n, Fn&& fn) {
  std::vector<Color> colors(n, 1);
  while (true) {
    fn(static_cast<const std::vector<Color>&>(colors));
    std::size_t v = 0;
    while (v < n && colors[v] == q) colors[v++] = 1;
    if (v == n) break;
    ++colors[v];
  }
}

}  // namespace gpm
