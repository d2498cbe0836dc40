// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace subnyq {

/// Every numerical threshold used by the library, in one place.
struct Tolerances {
  /// Largest admissible 2-norm condition number of a per-frequency operator.
  double cond_tol = 1e8;
  /// Absolute Hermitian-symmetry tolerance applied before eigensolves.
  double hermitian_tol = 1e-12;
  /// Relative eigenvalue cutoff when extracting a frame from Q.
  double frame_rank_tol = 1e-10;
  /// Negative-eigenvalue allowance for Q, relative to trace(Q).
  double psd_tol = 1e-10;
  /// Relative singular-value cutoff for rank decisions (Kruskal rank, A_S).
  double rank_tol = 1e-10;
  /// Relative Frobenius residual below which a support explains the frame.
  double residual_tol = 1e-8;
  /// NMSE at or below which a recovery counts as exact.
  double success_nmse = 1e-9;
  /// Reconstructed-norm threshold for the zero-signal NMSE convention.
  double zero_signal_tol = 1e-12;
};

}  // namespace subnyq
