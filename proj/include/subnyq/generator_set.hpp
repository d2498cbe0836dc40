// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>

#include "subnyq/frequency_grid.hpp"
#include "subnyq/periodic_matrix.hpp"
#include "subnyq/types.hpp"

namespace subnyq {

enum class GeneratorKind {
  /// Finitely many nonzero aliases: spectra tabulated at w_q/T - 2*pi*j/T.
  Bandlimited,
  /// Piecewise constant on cells of width T/L, circular over N periods.
  PiecewiseConstant,
};

/// A bank of continuous-time functions g_l(t) (generators, sampling filters,
/// biorthogonal sets) described exactly by finitely many numbers, so that every
/// cross-spectrum between two sets of the same kind is a finite sum.
///
/// Bandlimited sets store, for each channel l, an N x J table whose (q, j)
/// entry is G_l(w_q/T - 2*pi*alias[j]/T). Aliases outside the declared support
/// evaluate to exactly zero.
///
/// Piecewise-constant sets store g_l(t) = sum_c cells(l, c) 1[c*w <= t < (c+1)*w]
/// with w = T/L and c = 0 .. N*L-1, interpreted circularly over N periods.
class GeneratorSet {
 public:
  /// Continuous-frequency evaluator G_l(omega); optional for bandlimited sets.
  using Evaluator = std::function<Complex(Index channel, double omega)>;

  static GeneratorSet bandlimited(FrequencyGrid grid, double period, std::vector<int> alias_support,
                                  std::vector<CMatrix> spectra, Evaluator evaluator = {});
  static GeneratorSet piecewise_constant(FrequencyGrid grid, double period, Index cells_per_period,
                                         CMatrix cells);

  GeneratorKind kind() const { return kind_; }
  Index count() const { return count_; }
  double period() const { return period_; }
  const FrequencyGrid& grid() const { return grid_; }

  const std::vector<int>& alias_support() const { return alias_support_; }
  /// N x J table of channel l (bandlimited only).
  const CMatrix& spectrum(Index channel) const;

  /// count x (N*L) cell values (piecewise-constant only).
  const CMatrix& cells() const;
  Index cells_per_period() const { return cells_per_period_; }
  double cell_width() const { return period_ / static_cast<double>(cells_per_period_); }

  /// Fourier transform G_l(omega). Bandlimited sets without an evaluator only
  /// answer at grid-aligned frequencies w_q/T - 2*pi*j/T; elsewhere they throw.
  Complex evaluate(Index channel, double omega) const;

  /// Time-domain value (piecewise-constant only; right-continuous).
  Complex value_at(Index channel, double t) const;

  /// Sub-bank holding only the given channels, in order.
  GeneratorSet select(const Support& channels) const;

  /// Checks that two sets can be paired in a cross-spectrum.
  void require_compatible(const GeneratorSet& other) const;

 private:
  GeneratorSet(GeneratorKind kind, FrequencyGrid grid, double period, Index count)
      : kind_(kind), grid_(grid), period_(period), count_(count) {}

  GeneratorKind kind_;
  FrequencyGrid grid_;
  double period_;
  Index count_;
  std::vector<int> alias_support_;
  std::vector<CMatrix> spectra_;
  Evaluator evaluator_;
  Index cells_per_period_ = 1;
  CMatrix cells_;
};

/// s_i(omega) = sum_r C_ir(exp(j omega T)) g_r(omega): a discrete-time
/// multichannel filter C (rows x g.count()) applied in front of the set g.
/// Realized exactly for both kinds (table product or circular convolution).
GeneratorSet mix(const PeriodicMatrixFunction& filter, const GeneratorSet& g);

/// Bandlimited set with i.i.d. complex normal spectra on `count + 2` aliases
/// centred on zero; generically a Riesz basis.
GeneratorSet random_bandlimited(const FrequencyGrid& grid, Index count, double period, std::uint64_t seed);

}  // namespace subnyq
