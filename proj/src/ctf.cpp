// SPDX-License-Identifier: Apache-2.0
#include "subnyq/ctf.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <limits>

#include "combinations.hpp"
#include "subnyq/dft.hpp"
#include "subnyq/linalg.hpp"

namespace subnyq {

MeasurementBank demodulate(const MeasurementBank& y, const MeasurementDesign& design, double cond_tol) {
  if (y.channels() != design.p()) throw DimensionError("demodulate: measurement bank must have p channels");
  if (y.length() != design.grid().size()) throw DimensionError("demodulate: sequence length must equal the grid size");
  return MeasurementBank(subnyq::apply(inverse(design.w(), cond_tol, "W"), y.values()));
}

CMatrix compute_q(const MeasurementBank& y) { return y.values() * y.values().adjoint(); }

CMatrix compute_q_frequency(const MeasurementBank& y) {
  const CMatrix f = dft_rows(y.values());
  return f * f.adjoint();
}

Frame frame_from_q(const CMatrix& q, const Tolerances& tol) {
  const CMatrix h = hermitian_part(q, tol.hermitian_tol);
  Frame frame;
  if (h.rows() == 0) {
    frame.v = CMatrix::Zero(0, 0);
    return frame;
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(h);
  const RVector& ascending = eig.eigenvalues();
  const Index p = h.rows();
  frame.eigenvalues = ascending.reverse();
  const double trace = h.trace().real();
  if (ascending(0) < -tol.psd_tol * std::max(trace, 0.0) || (trace <= 0.0 && ascending(0) < 0.0))
    throw InvalidInput("frame_from_q: Q is indefinite (eigenvalue " + std::to_string(ascending(0)) + ")");
  const double top = ascending(p - 1);
  Index r = 0;
  if (top > 0.0)
    while (r < p && frame.eigenvalues(r) > tol.frame_rank_tol * top) ++r;
  frame.v.resize(p, r);
  for (Index i = 0; i < r; ++i) frame.v.col(i) = eig.eigenvectors().col(p - 1 - i) * std::sqrt(frame.eigenvalues(i));
  return frame;
}

double support_residual(const CMatrix& a, const CMatrix& v, const Support& s, double rank_tol) {
  const double vn = v.norm();
  if (vn == 0.0) return 0.0;
  if (s.empty()) return 1.0;
  const CMatrix basis = range_basis(detail::select_columns(a, s), rank_tol);
  return (v - basis * (basis.adjoint() * v)).norm() / vn;
}

namespace {

void check_problem(const MMVProblem& problem) {
  if (problem.v.rows() != problem.a.rows()) throw DimensionError("MMV: V and A must have the same number of rows");
  if (problem.k_max < 0 || problem.k_max > problem.a.cols()) throw InvalidInput("MMV: need 0 <= k_max <= m");
}

void check_exhaustive_size(const MMVProblem& problem) {
  if (detail::binomial(problem.a.cols(), problem.k_max) > kExhaustiveMaxSubsets)
    throw ProblemTooLarge("solve_mmv_exhaustive: C(" + std::to_string(problem.a.cols()) + ", " +
                          std::to_string(problem.k_max) + ") exceeds the 1e6 subset guard");
}

}  // namespace

MMVSolution solve_mmv_exhaustive(const MMVProblem& problem, const Tolerances& tol) {
  check_problem(problem);
  check_exhaustive_size(problem);
  double best = std::numeric_limits<double>::infinity();
  MMVSolution found;
  for (Index size = 0; size <= problem.k_max; ++size) {
    const bool hit = detail::for_each_combination(problem.a.cols(), size, [&](const Support& s) {
      const double r = support_residual(problem.a, problem.v, s, tol.rank_tol);
      best = std::min(best, r);
      if (r <= tol.residual_tol) {
        found.support = s;
        found.relative_residual = r;
        return true;
      }
      return false;
    });
    if (hit) return found;
  }
  throw Infeasible("solve_mmv_exhaustive: no support of size <= " + std::to_string(problem.k_max) +
                       " explains V (best relative residual " + std::to_string(best) + ")",
                   best);
}

std::vector<Support> all_fitting_supports(const MMVProblem& problem, const Tolerances& tol) {
  check_problem(problem);
  check_exhaustive_size(problem);
  std::vector<Support> fits;
  for (Index size = 0; size <= problem.k_max; ++size)
    detail::for_each_combination(problem.a.cols(), size, [&](const Support& s) {
      if (support_residual(problem.a, problem.v, s, tol.rank_tol) <= tol.residual_tol) fits.push_back(s);
      return false;
    });
  return fits;
}

MMVSolution solve_mmv_somp(const MMVProblem& problem, const Tolerances& tol) {
  check_problem(problem);
  const CMatrix& a = problem.a;
  const CMatrix& v = problem.v;
  const double vn = v.norm();
  MMVSolution sol;
  if (vn == 0.0) return sol;

  const RVector col_norms = a.colwise().norm();
  std::vector<bool> chosen(static_cast<std::size_t>(a.cols()), false);
  CMatrix residual = v;
  sol.relative_residual = 1.0;
  while (static_cast<Index>(sol.support.size()) < problem.k_max && sol.relative_residual > tol.residual_tol) {
    const RVector scores = (a.adjoint() * residual).rowwise().norm();
    Index pick = -1;
    double best = -1.0;
    for (Index i = 0; i < a.cols(); ++i) {
      if (chosen[static_cast<std::size_t>(i)] || col_norms(i) == 0.0) continue;
      const double score = scores(i) / col_norms(i);
      if (score > best) {
        best = score;
        pick = i;
      }
    }
    if (pick < 0) break;
    chosen[static_cast<std::size_t>(pick)] = true;
    sol.support.push_back(pick);
    const CMatrix basis = range_basis(detail::select_columns(a, sol.support), tol.rank_tol);
    residual = v - basis * (basis.adjoint() * v);
    sol.relative_residual = residual.norm() / vn;
  }
  std::sort(sol.support.begin(), sol.support.end());
  return sol;
}

Solver parse_solver(const std::string& name) {
  if (name == "exhaustive") return Solver::Exhaustive;
  if (name == "somp") return Solver::Somp;
  throw ConfigError("unknown solver '" + name + "'");
}

std::string to_string(Solver s) { return s == Solver::Exhaustive ? "exhaustive" : "somp"; }

MMVSolution solve_mmv(const MMVProblem& problem, Solver solver, const Tolerances& tol) {
  return solver == Solver::Exhaustive ? solve_mmv_exhaustive(problem, tol) : solve_mmv_somp(problem, tol);
}

SupportRecovery recover_support(const MeasurementBank& y, const MeasurementDesign& design, Index k_max, Solver solver,
                                const Tolerances& tol, QDomain domain) {
  const MeasurementBank demod = demodulate(y, design, tol.cond_tol);
  const CMatrix q = domain == QDomain::Time ? compute_q(demod) : compute_q_frequency(demod);
  Frame frame = frame_from_q(q, tol);
  SupportRecovery out;
  out.rank_q = frame.v.cols();
  out.q_eigenvalues = frame.eigenvalues;
  const MMVSolution sol = solve_mmv(MMVProblem{design.a(), frame.v, k_max}, solver, tol);
  out.support = sol.support;
  out.relative_residual = sol.relative_residual;
  out.frame = std::move(frame.v);
  return out;
}

CoefficientBank recover_coefficients(const MeasurementBank& y, const MeasurementDesign& design, const Support& s,
                                     const Tolerances& tol) {
  if (y.channels() != design.p() || y.length() != design.grid().size())
    throw DimensionError("recover_coefficients: measurement bank does not match the design");
  CMatrix out = CMatrix::Zero(design.m(), y.length());
  if (s.empty()) return CoefficientBank(std::move(out));
  for (Index c : s)
    if (c < 0 || c >= design.m()) throw DimensionError("recover_coefficients: support index out of range");

  const CMatrix a_s = detail::select_columns(design.a(), s);
  if (numerical_rank(a_s, tol.rank_tol) < a_s.cols())
    throw InvalidInput("recover_coefficients: A_S has linearly dependent columns for S = " + format_support(s));
  const CMatrix pinv = pseudo_inverse(a_s, tol.rank_tol);

  const CMatrix demod_freq = dft_rows(demodulate(y, design, tol.cond_tol).values());
  CMatrix x_freq = pinv * demod_freq;
  if (design.z()) {
    const PeriodicMatrixFunction& z = *design.z();
    for (Index q = 0; q < x_freq.cols(); ++q)
      for (std::size_t i = 0; i < s.size(); ++i) x_freq(static_cast<Index>(i), q) /= z[q](s[i], s[i]);
  }
  const CMatrix x_time = idft_rows(x_freq);
  for (std::size_t i = 0; i < s.size(); ++i) out.row(s[i]) = x_time.row(static_cast<Index>(i));
  return CoefficientBank(std::move(out));
}

RecoveryResult recover(const MeasurementBank& y, const MeasurementDesign& design, Index k_max, Solver solver,
                       const Tolerances& tol) {
  SupportRecovery sr = recover_support(y, design, k_max, solver, tol);
  CoefficientBank coeffs = recover_coefficients(y, design, sr.support, tol);
  RecoveryDiagnostics diag{sr.rank_q, sr.relative_residual, solver, sr.q_eigenvalues};
  return RecoveryResult{std::move(sr.support), std::move(coeffs), std::move(diag)};
}

}  // namespace subnyq
