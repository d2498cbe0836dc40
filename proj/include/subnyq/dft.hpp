// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "subnyq/types.hpp"

namespace subnyq {

// Row-wise DFT of a channels x samples bank.
//   forward: X[q] = sum_n x[n] exp(-j 2 pi q n / N)
//   inverse: x[n] = (1/N) sum_q X[q] exp(+j 2 pi q n / N)

CMatrix dft_rows(const CMatrix& time);
CMatrix idft_rows(const CMatrix& freq);

CVector dft(const CVector& x);
CVector idft(const CVector& x);

/// DTFT of a finite sequence supported on n = 0..N-1, evaluated at theta.
Complex dtft(const Eigen::Ref<const CVector>& x, double theta);

}  // namespace subnyq
