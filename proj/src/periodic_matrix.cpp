// SPDX-License-Identifier: Apache-2.0
#include "subnyq/periodic_matrix.hpp"

#include <cstdio>
#include <limits>

#include "subnyq/dft.hpp"
#include "subnyq/linalg.hpp"

namespace subnyq {

PeriodicMatrixFunction::PeriodicMatrixFunction(FrequencyGrid grid, Index rows, Index cols)
    : grid_(grid), rows_(rows), cols_(cols),
      values_(static_cast<std::size_t>(grid.size()), CMatrix::Zero(rows, cols)) {}

PeriodicMatrixFunction::PeriodicMatrixFunction(FrequencyGrid grid, std::vector<CMatrix> values)
    : grid_(grid), rows_(0), cols_(0), values_(std::move(values)) {
  if (static_cast<Index>(values_.size()) != grid_.size())
    throw DimensionError("PeriodicMatrixFunction: expected one matrix per grid point");
  rows_ = values_.front().rows();
  cols_ = values_.front().cols();
  for (const auto& v : values_)
    if (v.rows() != rows_ || v.cols() != cols_)
      throw DimensionError("PeriodicMatrixFunction: inconsistent matrix shapes across the grid");
}

PeriodicMatrixFunction PeriodicMatrixFunction::constant(FrequencyGrid grid, const CMatrix& value) {
  return PeriodicMatrixFunction(grid, std::vector<CMatrix>(static_cast<std::size_t>(grid.size()), value));
}

PeriodicMatrixFunction PeriodicMatrixFunction::identity(FrequencyGrid grid, Index n) {
  return constant(grid, CMatrix::Identity(n, n));
}

PeriodicMatrixFunction PeriodicMatrixFunction::from_function(FrequencyGrid grid, Index rows, Index cols,
                                                             const std::function<CMatrix(double)>& f) {
  std::vector<CMatrix> values;
  values.reserve(static_cast<std::size_t>(grid.size()));
  for (Index q = 0; q < grid.size(); ++q) {
    CMatrix v = f(grid.point(q));
    if (v.rows() != rows || v.cols() != cols)
      throw DimensionError("PeriodicMatrixFunction::from_function: wrong matrix shape");
    values.push_back(std::move(v));
  }
  return PeriodicMatrixFunction(grid, std::move(values));
}

PeriodicMatrixFunction PeriodicMatrixFunction::conjugate() const {
  PeriodicMatrixFunction out = *this;
  for (auto& v : out.values_) v = v.conjugate().eval();
  return out;
}

PeriodicMatrixFunction PeriodicMatrixFunction::adjoint() const {
  std::vector<CMatrix> values;
  values.reserve(values_.size());
  for (const auto& v : values_) values.push_back(v.adjoint());
  return PeriodicMatrixFunction(grid_, std::move(values));
}

double PeriodicMatrixFunction::max_abs() const {
  double m = 0.0;
  for (const auto& v : values_) m = std::max(m, subnyq::max_abs(v));
  return m;
}

std::vector<CMatrix> PeriodicMatrixFunction::impulse_response() const {
  const Index n = size();
  std::vector<CMatrix> taps(static_cast<std::size_t>(n), CMatrix::Zero(rows_, cols_));
  for (Index r = 0; r < rows_; ++r) {
    for (Index c = 0; c < cols_; ++c) {
      CVector spectrum(n);
      for (Index q = 0; q < n; ++q) spectrum(q) = (*this)[q](r, c);
      const CVector h = idft(spectrum);
      for (Index t = 0; t < n; ++t) taps[static_cast<std::size_t>(t)](r, c) = h(t);
    }
  }
  return taps;
}

PeriodicMatrixFunction operator*(const PeriodicMatrixFunction& lhs, const PeriodicMatrixFunction& rhs) {
  if (!(lhs.grid() == rhs.grid())) throw DimensionError("PeriodicMatrixFunction product: grid mismatch");
  if (lhs.cols() != rhs.rows()) throw DimensionError("PeriodicMatrixFunction product: inner dimension mismatch");
  std::vector<CMatrix> values;
  values.reserve(static_cast<std::size_t>(lhs.size()));
  for (Index q = 0; q < lhs.size(); ++q) values.push_back(lhs[q] * rhs[q]);
  return PeriodicMatrixFunction(lhs.grid(), std::move(values));
}

PeriodicMatrixFunction operator*(const PeriodicMatrixFunction& lhs, const CMatrix& rhs) {
  if (lhs.cols() != rhs.rows()) throw DimensionError("PeriodicMatrixFunction product: inner dimension mismatch");
  std::vector<CMatrix> values;
  values.reserve(static_cast<std::size_t>(lhs.size()));
  for (Index q = 0; q < lhs.size(); ++q) values.push_back(lhs[q] * rhs);
  return PeriodicMatrixFunction(lhs.grid(), std::move(values));
}

PeriodicMatrixFunction operator*(const CMatrix& lhs, const PeriodicMatrixFunction& rhs) {
  if (lhs.cols() != rhs.rows()) throw DimensionError("PeriodicMatrixFunction product: inner dimension mismatch");
  std::vector<CMatrix> values;
  values.reserve(static_cast<std::size_t>(rhs.size()));
  for (Index q = 0; q < rhs.size(); ++q) values.push_back(lhs * rhs[q]);
  return PeriodicMatrixFunction(rhs.grid(), std::move(values));
}

PeriodicMatrixFunction operator-(const PeriodicMatrixFunction& lhs, const PeriodicMatrixFunction& rhs) {
  if (!(lhs.grid() == rhs.grid()) || lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols())
    throw DimensionError("PeriodicMatrixFunction difference: shape mismatch");
  std::vector<CMatrix> values;
  values.reserve(static_cast<std::size_t>(lhs.size()));
  for (Index q = 0; q < lhs.size(); ++q) values.push_back(lhs[q] - rhs[q]);
  return PeriodicMatrixFunction(lhs.grid(), std::move(values));
}

RVector condition_numbers(const PeriodicMatrixFunction& f) {
  RVector out(f.size());
  for (Index q = 0; q < f.size(); ++q) out(q) = condition_number(f[q]);
  return out;
}

namespace {

std::string format_condition(double cond) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", cond);
  return buf;
}

}  // namespace

PeriodicMatrixFunction inverse(const PeriodicMatrixFunction& f, double cond_tol, const std::string& what) {
  if (f.rows() != f.cols()) throw DimensionError(what + ": inverse of a non-square operator");
  std::vector<CMatrix> values;
  values.reserve(static_cast<std::size_t>(f.size()));
  for (Index q = 0; q < f.size(); ++q) {
    const double cond = condition_number(f[q]);
    if (!(cond <= cond_tol))
      throw SingularOperator(what + " is singular or ill-conditioned at grid point q=" + std::to_string(q) +
                                 " (condition number " + format_condition(cond) + ")",
                             q, cond);
    values.push_back(f[q].partialPivLu().inverse());
  }
  return PeriodicMatrixFunction(f.grid(), std::move(values));
}

CMatrix apply_freq(const PeriodicMatrixFunction& f, const CMatrix& freq) {
  if (freq.cols() != f.size()) throw DimensionError("apply: sequence length does not match the grid");
  if (freq.rows() != f.cols()) throw DimensionError("apply: channel count does not match the operator");
  CMatrix out(f.rows(), freq.cols());
  for (Index q = 0; q < f.size(); ++q) out.col(q) = f[q] * freq.col(q);
  return out;
}

CMatrix apply(const PeriodicMatrixFunction& f, const CMatrix& time) {
  return idft_rows(apply_freq(f, dft_rows(time)));
}

}  // namespace subnyq
