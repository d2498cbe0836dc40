// SPDX-License-Identifier: Apache-2.0
#pragma once

// Continuous-to-finite recovery: demodulate by W^{-1}, collapse the infinite
// set of measurement vectors into Q = sum y y^H, extract a frame V with
// Q = V V^H, solve the single MMV V = A U for the joint support, then recover
// the coefficients on that support by pseudo-inversion.

#include "subnyq/coefficient_bank.hpp"
#include "subnyq/sampling_design.hpp"
#include "subnyq/tolerances.hpp"

namespace subnyq {

/// y~(w_q) = W^{-1}(w_q) y(w_q).
MeasurementBank demodulate(const MeasurementBank& y, const MeasurementDesign& design,
                           double cond_tol = Tolerances{}.cond_tol);

/// Q = sum_n y[n] y^H[n] over the time samples.
CMatrix compute_q(const MeasurementBank& y);
/// Q = sum_q Y(w_q) Y^H(w_q) over the DFT bins (= N times the time-domain Q).
CMatrix compute_q_frequency(const MeasurementBank& y);

struct Frame {
  /// p x r, Q = V V^H.
  CMatrix v;
  /// Eigenvalues of Q, descending.
  RVector eigenvalues;
};

/// Eigendecomposition Q = U L U^H; keeps eigenvalues above rel_rank_tol * lambda_max.
/// Throws InvalidInput if Q is not Hermitian or has eigenvalues below
/// -psd_tol * trace(Q).
Frame frame_from_q(const CMatrix& q, const Tolerances& tol = {});

struct MMVProblem {
  CMatrix a;
  CMatrix v;
  Index k_max = 0;
};

struct MMVSolution {
  Support support;
  /// ||V - P_S V||_F / ||V||_F (0 for V = 0).
  double relative_residual = 0.0;
};

/// ||V - P_{A_S} V||_F / ||V||_F for the orthogonal projector onto range(A_S).
double support_residual(const CMatrix& a, const CMatrix& v, const Support& s, double rank_tol = 1e-10);

inline constexpr double kExhaustiveMaxSubsets = 1e6;

/// Exact l0 MMV: the smallest support (ties: lexicographic) whose columns
/// explain V to tol.residual_tol. Throws Infeasible when no support of size
/// <= k_max fits and ProblemTooLarge when C(m, k_max) exceeds 1e6.
MMVSolution solve_mmv_exhaustive(const MMVProblem& problem, const Tolerances& tol = {});

/// Every support of size <= k_max that explains V (brute-force uniqueness audit).
std::vector<Support> all_fitting_supports(const MMVProblem& problem, const Tolerances& tol = {});

/// Simultaneous OMP: greedily add the column maximizing ||a_i^H R||_2 / ||a_i||_2
/// (lowest index on ties), re-project V onto the selection, stop at k_max atoms
/// or relative residual <= tol.residual_tol.
MMVSolution solve_mmv_somp(const MMVProblem& problem, const Tolerances& tol = {});

enum class Solver { Exhaustive, Somp };

Solver parse_solver(const std::string& name);
std::string to_string(Solver s);

MMVSolution solve_mmv(const MMVProblem& problem, Solver solver, const Tolerances& tol = {});

struct SupportRecovery {
  Support support;
  Index rank_q = 0;
  RVector q_eigenvalues;
  double relative_residual = 0.0;
  CMatrix frame;
};

enum class QDomain { Time, Frequency };

/// demodulate -> compute_q -> frame_from_q -> solve_mmv.
SupportRecovery recover_support(const MeasurementBank& y, const MeasurementDesign& design, Index k_max,
                                Solver solver, const Tolerances& tol = {}, QDomain domain = QDomain::Time);

/// d^S(w_q) = Z_S^{-1}(w_q) A_S^+ y~(w_q); channels off S are exactly zero.
/// Throws InvalidInput when A_S is rank deficient.
CoefficientBank recover_coefficients(const MeasurementBank& y, const MeasurementDesign& design, const Support& s,
                                     const Tolerances& tol = {});

struct RecoveryDiagnostics {
  Index rank_q = 0;
  double residual = 0.0;
  Solver solver = Solver::Exhaustive;
  RVector q_eigenvalues;
};

struct RecoveryResult {
  Support support;
  CoefficientBank coefficients;
  RecoveryDiagnostics diagnostics;
};

/// Full chain: support recovery followed by coefficient recovery.
RecoveryResult recover(const MeasurementBank& y, const MeasurementDesign& design, Index k_max, Solver solver,
                       const Tolerances& tol = {});

}  // namespace subnyq
