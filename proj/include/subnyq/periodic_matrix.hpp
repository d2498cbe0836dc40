// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>

#include "subnyq/frequency_grid.hpp"
#include "subnyq/types.hpp"

namespace subnyq {

/// A 2*pi-periodic matrix-valued function of frequency, sampled on a
/// FrequencyGrid. Every sample has the same rows x cols shape.
class PeriodicMatrixFunction {
 public:
  PeriodicMatrixFunction(FrequencyGrid grid, Index rows, Index cols);
  PeriodicMatrixFunction(FrequencyGrid grid, std::vector<CMatrix> values);

  static PeriodicMatrixFunction constant(FrequencyGrid grid, const CMatrix& value);
  static PeriodicMatrixFunction identity(FrequencyGrid grid, Index n);
  /// Samples f(w_q) at each grid frequency.
  static PeriodicMatrixFunction from_function(FrequencyGrid grid, Index rows, Index cols,
                                              const std::function<CMatrix(double)>& f);

  const FrequencyGrid& grid() const { return grid_; }
  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  Index size() const { return grid_.size(); }

  const CMatrix& operator[](Index q) const { return values_[static_cast<std::size_t>(q)]; }
  CMatrix& operator[](Index q) { return values_[static_cast<std::size_t>(q)]; }
  const std::vector<CMatrix>& values() const { return values_; }

  /// Entrywise complex conjugate (not transposed).
  PeriodicMatrixFunction conjugate() const;
  PeriodicMatrixFunction adjoint() const;

  /// Largest entrywise modulus over all grid points.
  double max_abs() const;

  /// Time-domain taps h[n] = IDFT of each entry, as a rows x cols x N stack.
  std::vector<CMatrix> impulse_response() const;

 private:
  FrequencyGrid grid_;
  Index rows_;
  Index cols_;
  std::vector<CMatrix> values_;
};

PeriodicMatrixFunction operator*(const PeriodicMatrixFunction& lhs, const PeriodicMatrixFunction& rhs);
PeriodicMatrixFunction operator*(const PeriodicMatrixFunction& lhs, const CMatrix& rhs);
PeriodicMatrixFunction operator*(const CMatrix& lhs, const PeriodicMatrixFunction& rhs);
PeriodicMatrixFunction operator-(const PeriodicMatrixFunction& lhs, const PeriodicMatrixFunction& rhs);

/// Per-point 2-norm condition numbers (infinity where singular).
RVector condition_numbers(const PeriodicMatrixFunction& f);

/// Pointwise inverse. Throws SingularOperator naming the first grid point whose
/// condition number exceeds cond_tol; `what` prefixes the message.
PeriodicMatrixFunction inverse(const PeriodicMatrixFunction& f, double cond_tol,
                               const std::string& what = "operator");

/// Applies the multichannel filter: Y(w_q) = F(w_q) X(w_q), where X is the DFT
/// of the rows of `time` (channels x N). Returns time-domain output.
CMatrix apply(const PeriodicMatrixFunction& f, const CMatrix& time);

/// Same as apply() but on data already in the frequency domain.
CMatrix apply_freq(const PeriodicMatrixFunction& f, const CMatrix& freq);

}  // namespace subnyq
