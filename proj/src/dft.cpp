// SPDX-License-Identifier: Apache-2.0
#include "subnyq/dft.hpp"

#include <unsupported/Eigen/FFT>

namespace subnyq {

namespace {

CVector transform(const CVector& x, bool forward) {
  // kissfft does not handle a single point; the 1-point DFT is the identity.
  if (x.size() <= 1) return x;
  CVector out(x.size());
  Eigen::FFT<double> fft;
  if (forward)
    fft.fwd(out, x);
  else
    fft.inv(out, x);
  return out;
}

CMatrix transform_rows(const CMatrix& in, bool forward) {
  CMatrix out(in.rows(), in.cols());
  for (Index r = 0; r < in.rows(); ++r) out.row(r) = transform(in.row(r).transpose(), forward).transpose();
  return out;
}

}  // namespace

CVector dft(const CVector& x) { return transform(x, true); }
CVector idft(const CVector& x) { return transform(x, false); }
CMatrix dft_rows(const CMatrix& time) { return transform_rows(time, true); }
CMatrix idft_rows(const CMatrix& freq) { return transform_rows(freq, false); }

Complex dtft(const Eigen::Ref<const CVector>& x, double theta) {
  Complex acc{0.0, 0.0};
  for (Index n = 0; n < x.size(); ++n) acc += x(n) * std::polar(1.0, -theta * static_cast<double>(n));
  return acc;
}

}  // namespace subnyq
