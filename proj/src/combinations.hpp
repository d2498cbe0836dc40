// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>

#include "subnyq/types.hpp"

namespace subnyq::detail {

/// Visits every k-subset of {0..n-1} in lexicographic order. The visitor
/// returns true to stop early; for_each_combination then returns true too.
template <typename Visitor>
bool for_each_combination(Index n, Index k, Visitor&& visit) {
  if (k < 0 || k > n) return false;
  Support idx(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    if (visit(static_cast<const Support&>(idx))) return true;
    Index i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return false;
    ++idx[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

inline double binomial(Index n, Index k) {
  if (k < 0 || k > n) return 0.0;
  return std::round(std::exp(std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(k) + 1) -
                             std::lgamma(static_cast<double>(n - k) + 1)));
}

inline CMatrix select_columns(const CMatrix& a, const Support& s) {
  CMatrix out(a.rows(), static_cast<Index>(s.size()));
  for (std::size_t i = 0; i < s.size(); ++i) out.col(static_cast<Index>(i)) = a.col(s[i]);
  return out;
}

}  // namespace subnyq::detail
