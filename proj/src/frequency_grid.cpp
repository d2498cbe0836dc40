// SPDX-License-Identifier: Apache-2.0
#include "subnyq/frequency_grid.hpp"

namespace subnyq {

FrequencyGrid::FrequencyGrid(Index n) : n_(n) {
  if (n < 1) throw InvalidInput("FrequencyGrid: N must be positive");
}

RVector FrequencyGrid::points() const {
  RVector w(n_);
  for (Index q = 0; q < n_; ++q) w(q) = point(q);
  return w;
}

}  // namespace subnyq
