// SPDX-License-Identifier: Apache-2.0
#include "subnyq/coefficient_bank.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace subnyq {

Support nonzero_rows(const CMatrix& values) {
  Support s;
  for (Index r = 0; r < values.rows(); ++r)
    if ((values.row(r).array() != Complex(0.0, 0.0)).any()) s.push_back(r);
  return s;
}

CoefficientBank::CoefficientBank(Index channels, Index length) : values_(CMatrix::Zero(channels, length)) {}

CoefficientBank::CoefficientBank(CMatrix values) : values_(std::move(values)), support_(nonzero_rows(values_)) {}

CoefficientBank::CoefficientBank(CMatrix values, const Support& declared) : CoefficientBank(std::move(values)) {
  for (Index c : support_)
    if (!std::binary_search(declared.begin(), declared.end(), c))
      throw InvalidInput("CoefficientBank: channel " + std::to_string(c + 1) + " is nonzero but outside the declared support");
}

double nmse(const CMatrix& estimate, const CMatrix& truth, double zero_tol) {
  if (estimate.rows() != truth.rows() || estimate.cols() != truth.cols())
    throw DimensionError("nmse: shape mismatch");
  const double denom = truth.squaredNorm();
  if (denom == 0.0)
    return estimate.norm() <= zero_tol ? 0.0 : std::numeric_limits<double>::infinity();
  return (estimate - truth).squaredNorm() / denom;
}

std::string format_support(const Support& s) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i] + 1;
  os << '}';
  return os.str();
}

}  // namespace subnyq
