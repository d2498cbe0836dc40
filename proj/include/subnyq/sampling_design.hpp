// SPDX-License-Identifier: Apache-2.0
#pragma once

// Compressive sampling system: CS matrix A, shaping filter bank W(e^{jw}),
// optional diagonal Z(e^{jw}), biorthogonal sets and the resulting p analog
// sampling filters.

#include <optional>

#include "subnyq/coefficient_bank.hpp"
#include "subnyq/generator_set.hpp"
#include "subnyq/periodic_matrix.hpp"
#include "subnyq/tolerances.hpp"

namespace subnyq {

enum class MatrixKind { Gaussian, RealGaussian, Bernoulli, FourierRows };

MatrixKind parse_matrix_kind(const std::string& name);
std::string to_string(MatrixKind kind);

/// p x m sensing matrix.
///  - Gaussian: i.i.d. complex normal, columns scaled to unit norm.
///  - RealGaussian: i.i.d. real normal, columns scaled to unit norm.
///  - Bernoulli: +-1/sqrt(p).
///  - FourierRows: rows c_i of the unitary m-point DFT, A_il = exp(j 2 pi l c_i / m) / sqrt(m).
///    `rows` supplies c_i; when empty the first p rows are used.
CMatrix make_cs_matrix(MatrixKind kind, Index p, Index m, std::uint64_t seed,
                       const std::vector<int>& rows = {});

/// A named design-invariant violation, e.g. "sampling_design.W_invertible".
struct DesignViolation : std::invalid_argument {
  DesignViolation(std::string check, const std::string& detail)
      : std::invalid_argument(check + ": " + detail), check(std::move(check)) {}
  std::string check;
};

class MeasurementDesign {
 public:
  /// Shape checks only; call validate() for the numerical invariants.
  MeasurementDesign(CMatrix a, PeriodicMatrixFunction w, std::optional<PeriodicMatrixFunction> z = std::nullopt,
                    MatrixKind kind = MatrixKind::Gaussian, std::uint64_t seed = 0);

  /// A with W = I and no Z.
  static MeasurementDesign plain(CMatrix a, FrequencyGrid grid, MatrixKind kind = MatrixKind::Gaussian,
                                 std::uint64_t seed = 0);

  Index p() const { return a_.rows(); }
  Index m() const { return a_.cols(); }
  const FrequencyGrid& grid() const { return w_.grid(); }
  const CMatrix& a() const { return a_; }
  const PeriodicMatrixFunction& w() const { return w_; }
  const std::optional<PeriodicMatrixFunction>& z() const { return z_; }
  MatrixKind kind() const { return kind_; }
  std::uint64_t seed() const { return seed_; }

  /// Throws DesignViolation ("sampling_design.W_invertible",
  /// "sampling_design.Z_invertible", "sampling_design.A_shape").
  void validate(const Tolerances& tol = {}) const;

  /// Z, or the identity when absent.
  PeriodicMatrixFunction z_or_identity() const;

 private:
  CMatrix a_;
  PeriodicMatrixFunction w_;
  std::optional<PeriodicMatrixFunction> z_;
  MatrixKind kind_;
  std::uint64_t seed_;
};

/// Random invertible p x p filter bank W(e^{jw}) = 2I + (G0 + G1 e^{-jw}) / (4 sqrt(p)).
PeriodicMatrixFunction random_shaping_filter(Index p, const FrequencyGrid& grid, std::uint64_t seed);

/// Random diagonal m x m filter with |Z_ii(e^{jw})| >= 0.4.
PeriodicMatrixFunction random_diagonal_filter(Index m, const FrequencyGrid& grid, std::uint64_t seed);

/// v(omega) = conj(M_HA^{-1}(e^{j omega T})) h(omega); the result satisfies
/// M_VA = I. Throws SingularOperator naming the first bad grid point.
GeneratorSet biorthogonalize(const GeneratorSet& h, const GeneratorSet& generators,
                             double cond_tol = Tolerances{}.cond_tol);

/// s(omega) = conj(W(e^{j omega T}) A Z(e^{j omega T})) v(omega), so that
/// M_SA = W A Z whenever v is biorthogonal to the generators.
GeneratorSet build_sampling_filters(const MeasurementDesign& design, const GeneratorSet& biorthogonal);

/// W A Z as a periodic matrix function.
PeriodicMatrixFunction combined_operator(const MeasurementDesign& design);

/// y(w_q) = W(w_q) A Z(w_q) d(w_q), applied stage by stage.
MeasurementBank compressive_sample(const CoefficientBank& d, const MeasurementDesign& design);

inline constexpr Index kKruskalMaxColumns = 24;

/// Largest q such that every q columns of A are linearly independent
/// (rank by singular values, sigma_min > rel_tol * sigma_max).
/// Throws ProblemTooLarge when A has more than kKruskalMaxColumns columns.
Index kruskal_rank(const CMatrix& a, double rel_tol = Tolerances{}.rank_tol);

struct RateReport {
  Index p = 0;
  Index m = 0;
  Index kruskal_rank = 0;
  /// floor(kruskal_rank / 2): largest k with guaranteed uniqueness.
  Index k_max_unique = 0;
};

RateReport verify_rate(const CMatrix& a, double rel_tol = Tolerances{}.rank_tol);
RateReport verify_rate(const MeasurementDesign& design, double rel_tol = Tolerances{}.rank_tol);

}  // namespace subnyq
