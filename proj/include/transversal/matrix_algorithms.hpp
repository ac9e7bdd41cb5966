#pragma once

// Division-free determinant and permanent over an arbitrary commutative ring.
//
// Both run over column subsets in O(2^k * k) ring operations and never divide,
// so they work unchanged for integers, cyclotomic integers, finite fields and
// backend-tagged RingValues. Matrices are row-major k*k spans.

#include <gmpxx.h>

#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "transversal/errors.hpp"

namespace transversal {

inline constexpr std::size_t kMaxMatrixSize = 10;

namespace detail {

inline bool value_is_zero(const mpz_class& v) { return v == 0; }
inline bool value_is_zero(std::int64_t v) { return v == 0; }
template <class T>
bool value_is_zero(const T& v) {
  return v.is_zero();
}

template <class T>
void check_square(std::span<const T> grid, std::size_t k) {
  if (k == 0) throw DomainError("matrix size must be >= 1");
  if (k > kMaxMatrixSize) {
    throw RefusalError("matrix size " + std::to_string(k) + " exceeds cap " + std::to_string(kMaxMatrixSize));
  }
  if (grid.size() != k * k) throw StructuralError("matrix grid is not k x k");
}

}  // namespace detail

// Dynamic programming over the set of columns used by the first rows. Placing
// row i in column j contributes one inversion per earlier row in a column > j.
template <class T>
T determinant(std::span<const T> grid, std::size_t k) {
  detail::check_square(grid, k);
  const std::uint32_t full = (1u << k) - 1;
  std::vector<std::optional<T>> dp(full + 1);
  for (std::size_t j = 0; j < k; ++j) dp[1u << j] = grid[j];
  for (std::uint32_t mask = 1; mask < full; ++mask) {
    if (!dp[mask] || detail::value_is_zero(*dp[mask])) continue;
    const std::size_t row = static_cast<std::size_t>(std::popcount(mask));
    for (std::size_t j = 0; j < k; ++j) {
      const std::uint32_t bit = 1u << j;
      if (mask & bit) continue;
      const T& entry = grid[row * k + j];
      if (detail::value_is_zero(entry)) continue;
      T term = *dp[mask] * entry;
      const bool odd = std::popcount(mask >> (j + 1)) % 2 != 0;
      auto& slot = dp[mask | bit];
      if (!slot) {
        slot = odd ? T(-term) : T(std::move(term));
      } else if (odd) {
        *slot -= term;
      } else {
        *slot += term;
      }
    }
  }
  if (dp[full]) return *dp[full];
  return grid[0] - grid[0];
}

// Ryser's formula per(A) = (-1)^k sum_{S} (-1)^{|S|} prod_i sum_{j in S} a_ij,
// walking the subsets in Gray-code order so each step touches one column.
template <class T>
T permanent(std::span<const T> grid, std::size_t k) {
  detail::check_square(grid, k);
  const T zero = grid[0] - grid[0];
  std::vector<T> row_sums(k, zero);
  std::optional<T> total;
  const std::uint32_t count = 1u << k;
  std::uint32_t gray = 0;
  for (std::uint32_t g = 1; g < count; ++g) {
    const int j = std::countr_zero(g);
    const std::uint32_t bit = 1u << j;
    gray ^= bit;
    const bool added = (gray & bit) != 0;
    for (std::size_t i = 0; i < k; ++i) {
      if (added) {
        row_sums[i] += grid[i * k + static_cast<std::size_t>(j)];
      } else {
        row_sums[i] -= grid[i * k + static_cast<std::size_t>(j)];
      }
    }
    bool any_zero = false;
    for (const auto& s : row_sums) {
      if (detail::value_is_zero(s)) {
        any_zero = true;
        break;
      }
    }
    if (any_zero) continue;
    T product = row_sums[0];
    for (std::size_t i = 1; i < k; ++i) product *= row_sums[i];
    const bool negative = (std::popcount(gray) + k) % 2 != 0;
    if (!total) {
      total = negative ? T(-product) : T(std::move(product));
    } else if (negative) {
      *total -= product;
    } else {
      *total += product;
    }
  }
  return total ? *total : zero;
}

}  // namespace transversal
