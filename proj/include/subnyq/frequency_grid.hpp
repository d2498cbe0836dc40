// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "subnyq/types.hpp"

namespace subnyq {

/// Uniform grid of N digital frequencies w_q = 2*pi*q/N on [0, 2*pi).
class FrequencyGrid {
 public:
  explicit FrequencyGrid(Index n);

  Index size() const { return n_; }
  double point(Index q) const { return 2.0 * kPi * static_cast<double>(q) / static_cast<double>(n_); }
  RVector points() const;

  friend bool operator==(const FrequencyGrid&, const FrequencyGrid&) = default;

 private:
  Index n_;
};

}  // namespace subnyq
