// SPDX-License-Identifier: Apache-2.0
#pragma once

// Shift-invariant space machinery: cross-spectra, Riesz bounds, filter-bank
// sampling and non-sparse subspace reconstruction.

#include "subnyq/coefficient_bank.hpp"
#include "subnyq/generator_set.hpp"
#include "subnyq/periodic_matrix.hpp"
#include "subnyq/tolerances.hpp"

namespace subnyq {

/// phi_SA(e^{jw_q}) for one channel pair: the DTFT of the sampled
/// cross-correlation r[n] = <s(t - nT), a(t)>, evaluated on the shared grid.
///
/// Bandlimited sets use the alias sum (1/T) sum_j S*(.) A(.) over the declared
/// support. Piecewise-constant sets correlate their cells directly; both are
/// exact finite sums.
CVector cross_spectrum(const GeneratorSet& s, Index s_channel, const GeneratorSet& a, Index a_channel);

/// M_SA: entry (i, l) is cross_spectrum(s_i, a_l).
PeriodicMatrixFunction cross_spectrum_matrix(const GeneratorSet& s, const GeneratorSet& a);

struct RieszReport {
  bool holds = false;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
};

/// alpha*I <= M_AA(e^{jw_q}) <= beta*I at every grid point.
RieszReport riesz_check(const PeriodicMatrixFunction& gram, double alpha, double beta,
                        double hermitian_tol = Tolerances{}.hermitian_tol);

/// c(e^{jw}) = M_SA(e^{jw}) d(e^{jw}) on the grid; output is time domain.
MeasurementBank filterbank_sample(const CoefficientBank& d, const PeriodicMatrixFunction& m_sa);

/// Inverts filterbank_sample for square M_SA: d(w_q) = M_SA^{-1}(w_q) c(w_q).
CoefficientBank reconstruct_subspace(const MeasurementBank& c, const PeriodicMatrixFunction& m_sa,
                                     double cond_tol = Tolerances{}.cond_tol);

}  // namespace subnyq
