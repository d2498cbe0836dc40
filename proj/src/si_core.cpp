// SPDX-License-Identifier: Apache-2.0
#include "subnyq/si_core.hpp"

#include <Eigen/Eigenvalues>

#include "subnyq/dft.hpp"
#include "subnyq/linalg.hpp"

namespace subnyq {

namespace {

CVector alias_sum(const GeneratorSet& s, Index i, const GeneratorSet& a, Index l) {
  const CMatrix& st = s.spectrum(i);
  const CMatrix& at = a.spectrum(l);
  return (st.conjugate().cwiseProduct(at)).rowwise().sum() / s.period();
}

// r[n] = <s(t - nT), a(t)> = w * sum_c conj(s[c]) a[c + nL], then its N-point DTFT.
CVector cell_correlation(const GeneratorSet& s, Index i, const GeneratorSet& a, Index l) {
  const Index n = s.grid().size();
  const Index cells_per_period = s.cells_per_period();
  const CVector s_hat = dft(s.cells().row(i).transpose());
  const CVector a_hat = dft(a.cells().row(l).transpose());
  const CVector full = idft(s_hat.conjugate().cwiseProduct(a_hat));
  CVector r(n);
  for (Index k = 0; k < n; ++k) r(k) = s.cell_width() * full(k * cells_per_period);
  return dft(r);
}

}  // namespace

CVector cross_spectrum(const GeneratorSet& s, Index s_channel, const GeneratorSet& a, Index a_channel) {
  s.require_compatible(a);
  if (s_channel < 0 || s_channel >= s.count() || a_channel < 0 || a_channel >= a.count())
    throw DimensionError("cross_spectrum: channel out of range");
  return s.kind() == GeneratorKind::Bandlimited ? alias_sum(s, s_channel, a, a_channel)
                                                : cell_correlation(s, s_channel, a, a_channel);
}

PeriodicMatrixFunction cross_spectrum_matrix(const GeneratorSet& s, const GeneratorSet& a) {
  s.require_compatible(a);
  PeriodicMatrixFunction out(s.grid(), s.count(), a.count());
  for (Index i = 0; i < s.count(); ++i)
    for (Index l = 0; l < a.count(); ++l) {
      const CVector phi = cross_spectrum(s, i, a, l);
      for (Index q = 0; q < phi.size(); ++q) out[q](i, l) = phi(q);
    }
  return out;
}

RieszReport riesz_check(const PeriodicMatrixFunction& gram, double alpha, double beta, double hermitian_tol) {
  if (gram.rows() != gram.cols()) throw DimensionError("riesz_check: M_AA must be square");
  RieszReport report;
  report.min_eigenvalue = std::numeric_limits<double>::infinity();
  report.max_eigenvalue = -std::numeric_limits<double>::infinity();
  for (Index q = 0; q < gram.size(); ++q) {
    const CMatrix h = hermitian_part(gram[q], hermitian_tol);
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(h, Eigen::EigenvaluesOnly);
    report.min_eigenvalue = std::min(report.min_eigenvalue, eig.eigenvalues().minCoeff());
    report.max_eigenvalue = std::max(report.max_eigenvalue, eig.eigenvalues().maxCoeff());
  }
  report.holds = alpha <= report.min_eigenvalue && report.max_eigenvalue <= beta;
  return report;
}

MeasurementBank filterbank_sample(const CoefficientBank& d, const PeriodicMatrixFunction& m_sa) {
  if (m_sa.cols() != d.channels()) throw DimensionError("filterbank_sample: M_SA columns must equal the channel count");
  if (m_sa.size() != d.length()) throw DimensionError("filterbank_sample: grid size must equal the sequence length");
  return MeasurementBank(subnyq::apply(m_sa, d.values()));
}

CoefficientBank reconstruct_subspace(const MeasurementBank& c, const PeriodicMatrixFunction& m_sa, double cond_tol) {
  if (m_sa.rows() != m_sa.cols()) throw DimensionError("reconstruct_subspace: M_SA must be square");
  if (m_sa.rows() != c.channels() || m_sa.size() != c.length())
    throw DimensionError("reconstruct_subspace: sample bank does not match M_SA");
  const PeriodicMatrixFunction inv = inverse(m_sa, cond_tol, "M_SA");
  return CoefficientBank(subnyq::apply(inv, c.values()));
}

}  // namespace subnyq
