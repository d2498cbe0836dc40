// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace subnyq {

using Complex = std::complex<double>;
using Index = Eigen::Index;

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Sorted, duplicate-free set of 0-based channel indices.
using Support = std::vector<Index>;

// Error taxonomy. Every failure the library reports is one of these.

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InvalidInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A per-frequency operator is singular or too ill-conditioned to invert.
struct SingularOperator : std::runtime_error {
  SingularOperator(const std::string& what, Index grid_index, double condition)
      : std::runtime_error(what), grid_index(grid_index), condition(condition) {}
  Index grid_index;
  double condition;
};

/// No support within the sparsity budget explains the measurements.
struct Infeasible : std::runtime_error {
  Infeasible(const std::string& what, double best_residual)
      : std::runtime_error(what), best_residual(best_residual) {}
  double best_residual;
};

/// A combinatorial routine was asked for a problem beyond its size guard.
struct ProblemTooLarge : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr Complex kI{0.0, 1.0};

}  // namespace subnyq
