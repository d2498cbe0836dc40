// SPDX-License-Identifier: Apache-2.0
#include "subnyq/sampling_design.hpp"

#include <cmath>
#include <cstdio>

#include "combinations.hpp"
#include "subnyq/linalg.hpp"
#include "subnyq/random.hpp"
#include "subnyq/si_core.hpp"

namespace subnyq {

MatrixKind parse_matrix_kind(const std::string& name) {
  if (name == "gaussian") return MatrixKind::Gaussian;
  if (name == "real_gaussian") return MatrixKind::RealGaussian;
  if (name == "bernoulli") return MatrixKind::Bernoulli;
  if (name == "fourier_rows") return MatrixKind::FourierRows;
  throw ConfigError("unknown matrix_kind '" + name + "'");
}

std::string to_string(MatrixKind kind) {
  switch (kind) {
    case MatrixKind::Gaussian: return "gaussian";
    case MatrixKind::RealGaussian: return "real_gaussian";
    case MatrixKind::Bernoulli: return "bernoulli";
    case MatrixKind::FourierRows: return "fourier_rows";
  }
  return "gaussian";
}

CMatrix make_cs_matrix(MatrixKind kind, Index p, Index m, std::uint64_t seed, const std::vector<int>& rows) {
  if (p < 1 || m < 1) throw InvalidInput("make_cs_matrix: p and m must be positive");
  Rng rng(seed);
  CMatrix a(p, m);
  switch (kind) {
    case MatrixKind::Gaussian:
      a = random_complex_normal(rng, p, m);
      a.colwise().normalize();
      break;
    case MatrixKind::RealGaussian:
      for (Index c = 0; c < m; ++c)
        for (Index r = 0; r < p; ++r) a(r, c) = rng.normal();
      a.colwise().normalize();
      break;
    case MatrixKind::Bernoulli:
      for (Index c = 0; c < m; ++c)
        for (Index r = 0; r < p; ++r) a(r, c) = rng.sign() / std::sqrt(static_cast<double>(p));
      break;
    case MatrixKind::FourierRows: {
      if (!rows.empty() && static_cast<Index>(rows.size()) != p)
        throw DimensionError("make_cs_matrix: need exactly p Fourier row offsets");
      for (Index r = 0; r < p; ++r) {
        const int c = rows.empty() ? static_cast<int>(r) : rows[static_cast<std::size_t>(r)];
        for (Index l = 0; l < m; ++l) {
          // Reduce the phase index mod m to keep the angle exact.
          const long e = (static_cast<long>(l) * c) % static_cast<long>(m);
          a(r, l) = std::polar(1.0 / std::sqrt(static_cast<double>(m)),
                               2.0 * kPi * static_cast<double>(e) / static_cast<double>(m));
        }
      }
      break;
    }
  }
  return a;
}

MeasurementDesign::MeasurementDesign(CMatrix a, PeriodicMatrixFunction w, std::optional<PeriodicMatrixFunction> z,
                                     MatrixKind kind, std::uint64_t seed)
    : a_(std::move(a)), w_(std::move(w)), z_(std::move(z)), kind_(kind), seed_(seed) {
  if (w_.rows() != a_.rows() || w_.cols() != a_.rows())
    throw DimensionError("MeasurementDesign: W must be p x p with p = rows of A");
  if (z_) {
    if (z_->rows() != a_.cols() || z_->cols() != a_.cols())
      throw DimensionError("MeasurementDesign: Z must be m x m with m = columns of A");
    if (!(z_->grid() == w_.grid())) throw DimensionError("MeasurementDesign: W and Z use different grids");
  }
}

MeasurementDesign MeasurementDesign::plain(CMatrix a, FrequencyGrid grid, MatrixKind kind, std::uint64_t seed) {
  const Index p = a.rows();
  return MeasurementDesign(std::move(a), PeriodicMatrixFunction::identity(grid, p), std::nullopt, kind, seed);
}

namespace {

std::string scientific(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

}  // namespace

void MeasurementDesign::validate(const Tolerances& tol) const {
  if (p() > m()) throw DesignViolation("sampling_design.A_shape", "A has more rows than columns");
  for (Index q = 0; q < w_.size(); ++q) {
    const double cond = condition_number(w_[q]);
    if (!(cond <= tol.cond_tol))
      throw DesignViolation("sampling_design.W_invertible",
                            "W is singular or ill-conditioned at grid point q=" + std::to_string(q) +
                                " (condition number " + scientific(cond) + ")");
  }
  if (!z_) return;
  for (Index q = 0; q < z_->size(); ++q) {
    const CMatrix& zq = (*z_)[q];
    const RVector mags = zq.diagonal().cwiseAbs();
    if (max_abs(CMatrix(zq - CMatrix(zq.diagonal().asDiagonal()))) != 0.0)
      throw DesignViolation("sampling_design.Z_diagonal", "Z is not diagonal at grid point q=" + std::to_string(q));
    const double lo = mags.minCoeff();
    const double hi = mags.maxCoeff();
    if (!(lo >= 1.0 / tol.cond_tol) || !(hi <= tol.cond_tol * lo))
      throw DesignViolation("sampling_design.Z_invertible",
                            "Z has a vanishing or ill-conditioned diagonal at grid point q=" + std::to_string(q));
  }
}

PeriodicMatrixFunction MeasurementDesign::z_or_identity() const {
  return z_ ? *z_ : PeriodicMatrixFunction::identity(w_.grid(), m());
}

PeriodicMatrixFunction random_shaping_filter(Index p, const FrequencyGrid& grid, std::uint64_t seed) {
  Rng rng(seed);
  const CMatrix g0 = random_complex_normal(rng, p, p);
  const CMatrix g1 = random_complex_normal(rng, p, p);
  const double scale = 1.0 / (4.0 * std::sqrt(static_cast<double>(p)));
  return PeriodicMatrixFunction::from_function(grid, p, p, [&](double w) -> CMatrix {
    return 2.0 * CMatrix::Identity(p, p) + scale * (g0 + std::polar(1.0, -w) * g1);
  });
}

PeriodicMatrixFunction random_diagonal_filter(Index m, const FrequencyGrid& grid, std::uint64_t seed) {
  Rng rng(seed);
  CVector gain(m);
  CVector echo(m);
  for (Index i = 0; i < m; ++i) {
    gain(i) = std::polar(1.0 + rng.uniform(), 2.0 * kPi * rng.uniform());
    echo(i) = std::polar(0.6, 2.0 * kPi * rng.uniform());
  }
  return PeriodicMatrixFunction::from_function(grid, m, m, [&](double w) -> CMatrix {
    CVector diag(m);
    for (Index i = 0; i < m; ++i) diag(i) = gain(i) * (1.0 + echo(i) * std::polar(1.0, -w));
    return diag.asDiagonal();
  });
}

GeneratorSet biorthogonalize(const GeneratorSet& h, const GeneratorSet& generators, double cond_tol) {
  if (h.count() != generators.count())
    throw DimensionError("biorthogonalize: need as many h functions as generators");
  const PeriodicMatrixFunction m_ha = cross_spectrum_matrix(h, generators);
  return mix(inverse(m_ha, cond_tol, "M_HA").conjugate(), h);
}

PeriodicMatrixFunction combined_operator(const MeasurementDesign& design) {
  PeriodicMatrixFunction wa = design.w() * design.a();
  return design.z() ? wa * *design.z() : wa;
}

GeneratorSet build_sampling_filters(const MeasurementDesign& design, const GeneratorSet& biorthogonal) {
  if (biorthogonal.count() != design.m())
    throw DimensionError("build_sampling_filters: biorthogonal set must have m channels");
  if (!(biorthogonal.grid() == design.grid()))
    throw DimensionError("build_sampling_filters: design and biorthogonal set use different grids");
  return mix(combined_operator(design).conjugate(), biorthogonal);
}

MeasurementBank compressive_sample(const CoefficientBank& d, const MeasurementDesign& design) {
  if (d.channels() != design.m()) throw DimensionError("compressive_sample: coefficient bank must have m channels");
  if (d.length() != design.grid().size())
    throw DimensionError("compressive_sample: sequence length must equal the grid size");
  CMatrix stage = d.values();
  if (design.z()) stage = subnyq::apply(*design.z(), stage);
  stage = design.a() * stage;
  return MeasurementBank(subnyq::apply(design.w(), stage));
}

Index kruskal_rank(const CMatrix& a, double rel_tol) {
  const Index m = a.cols();
  if (m > kKruskalMaxColumns)
    throw ProblemTooLarge("kruskal_rank: " + std::to_string(m) + " columns exceeds the combinatorial guard of " +
                          std::to_string(kKruskalMaxColumns));
  // Subsets of independent sets are independent, so "every q columns are
  // independent" is monotone in q and the largest such q can be bisected.
  auto all_independent = [&](Index q) {
    return !detail::for_each_combination(m, q, [&](const Support& s) {
      const RVector sv = singular_values(detail::select_columns(a, s));
      return !(sv(sv.size() - 1) > rel_tol * sv(0));
    });
  };
  Index lo = 0;
  Index hi = std::min(a.rows(), m);
  if (all_independent(hi)) return hi;  // full spark, the usual case
  --hi;
  while (lo < hi) {
    const Index mid = (lo + hi + 1) / 2;
    if (all_independent(mid))
      lo = mid;
    else
      hi = mid - 1;
  }
  return lo;
}

RateReport verify_rate(const CMatrix& a, double rel_tol) {
  RateReport r;
  r.p = a.rows();
  r.m = a.cols();
  r.kruskal_rank = kruskal_rank(a, rel_tol);
  r.k_max_unique = r.kruskal_rank / 2;
  return r;
}

RateReport verify_rate(const MeasurementDesign& design, double rel_tol) { return verify_rate(design.a(), rel_tol); }

}  // namespace subnyq
