// SPDX-License-Identifier: Apache-2.0
#include "subnyq/linalg.hpp"

namespace subnyq {

CMatrix pseudo_inverse(const CMatrix& m, double rel_tol) {
  if (m.size() == 0) return CMatrix::Zero(m.cols(), m.rows());
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector& s = svd.singularValues();
  RVector inv = RVector::Zero(s.size());
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * s(0)) inv(i) = 1.0 / s(i);
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

CMatrix range_basis(const CMatrix& m, double rel_tol) {
  if (m.size() == 0) return CMatrix::Zero(m.rows(), 0);
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU);
  const RVector& s = svd.singularValues();
  Index r = 0;
  if (s(0) > 0.0)
    while (r < s.size() && s(r) > rel_tol * s(0)) ++r;
  return svd.matrixU().leftCols(r);
}

CMatrix hermitian_part(const CMatrix& m, double tol) {
  if (m.rows() != m.cols()) throw DimensionError("hermitian_part: matrix is not square");
  const double scale = std::max(1.0, max_abs(m));
  const double asym = max_abs(m - m.adjoint());
  if (asym > tol * scale)
    throw InvalidInput("matrix is not Hermitian (asymmetry " + std::to_string(asym) + ")");
  return (0.5 * (m + m.adjoint())).eval();
}

}  // namespace subnyq
