// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <random>

#include "subnyq/types.hpp"

namespace subnyq {

/// Seeded random source. The engine is std::mt19937_64 (fully specified by
/// the standard); the distributions below are written out explicitly so draws
/// are identical across standard-library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Standard normal (Box-Muller; one variate per call).
  double normal();
  /// Circularly-symmetric complex normal with E|z|^2 = 1.
  Complex complex_normal();
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);
  /// Random +1 / -1.
  double sign() { return (engine_() >> 63) ? 1.0 : -1.0; }

  /// k distinct sorted values drawn uniformly from [0, n).
  Support choose(Index n, Index k);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer: derives an independent seed from (master, counter).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter);

CMatrix random_complex_normal(Rng& rng, Index rows, Index cols);

}  // namespace subnyq
