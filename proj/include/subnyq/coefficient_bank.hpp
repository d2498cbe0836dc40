// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "subnyq/types.hpp"

namespace subnyq {

/// m expansion-coefficient sequences d_l[n] of length N (rows = channels),
/// with circular (DFT) convolution semantics. The support is the set of
/// channels that are not identically zero.
class CoefficientBank {
 public:
  CoefficientBank(Index channels, Index length);
  explicit CoefficientBank(CMatrix values);
  /// Validates that every channel outside `declared` is exactly zero.
  CoefficientBank(CMatrix values, const Support& declared);

  Index channels() const { return values_.rows(); }
  Index length() const { return values_.cols(); }
  const CMatrix& values() const { return values_; }
  const Support& support() const { return support_; }

  /// Sum of |d_l[n]|^2 over n.
  double channel_energy(Index channel) const { return values_.row(channel).squaredNorm(); }

 private:
  CMatrix values_;
  Support support_;
};

/// p compressed sample sequences y_i[n] of length N.
class MeasurementBank {
 public:
  explicit MeasurementBank(CMatrix values) : values_(std::move(values)) {}

  Index channels() const { return values_.rows(); }
  Index length() const { return values_.cols(); }
  const CMatrix& values() const { return values_; }

 private:
  CMatrix values_;
};

/// Support of a matrix: rows containing at least one exactly-nonzero entry.
Support nonzero_rows(const CMatrix& values);

/// ||estimate - truth||^2 / ||truth||^2, defined as 0 when the truth is zero
/// and the estimate norm is at most zero_tol (infinity otherwise).
double nmse(const CMatrix& estimate, const CMatrix& truth, double zero_tol = 1e-12);

/// Renders a support as "{1,4}" with 1-based indices.
std::string format_support(const Support& s);

}  // namespace subnyq
