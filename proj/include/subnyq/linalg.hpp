// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <limits>

#include <Eigen/SVD>

#include "subnyq/types.hpp"

namespace subnyq {

/// Singular values of any dense expression, descending.
template <typename Derived>
RVector singular_values(const Eigen::MatrixBase<Derived>& m) {
  using Plain = typename Derived::PlainObject;
  if (m.size() == 0) return RVector();
  return Eigen::BDCSVD<Plain>(m.eval()).singularValues();
}

/// Number of singular values above rel_tol * sigma_max.
template <typename Derived>
Index numerical_rank(const Eigen::MatrixBase<Derived>& m, double rel_tol) {
  const RVector s = singular_values(m);
  if (s.size() == 0 || s(0) == 0.0) return 0;
  Index r = 0;
  while (r < s.size() && s(r) > rel_tol * s(0)) ++r;
  return r;
}

/// 2-norm condition number; infinity for singular or empty-rank input.
template <typename Derived>
double condition_number(const Eigen::MatrixBase<Derived>& m) {
  const RVector s = singular_values(m);
  if (s.size() == 0) return std::numeric_limits<double>::infinity();
  const double lo = s(s.size() - 1);
  if (lo == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / lo;
}

/// Moore-Penrose pseudo-inverse with a relative singular-value cutoff.
CMatrix pseudo_inverse(const CMatrix& m, double rel_tol = 1e-10);

/// Orthonormal basis of range(m), dimension = numerical_rank(m, rel_tol).
CMatrix range_basis(const CMatrix& m, double rel_tol = 1e-10);

/// Returns (m + m^H)/2 after checking ||m - m^H||_max <= tol * max(1, ||m||_max).
/// Throws InvalidInput otherwise.
CMatrix hermitian_part(const CMatrix& m, double tol);

/// Largest entrywise modulus.
template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace subnyq
