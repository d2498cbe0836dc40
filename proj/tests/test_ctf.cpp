// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"
#include "oracles.hpp"
#include "subnyq/ctf.hpp"
#include "subnyq/linalg.hpp"
#include "subnyq/random.hpp"
#include "subnyq/si_core.hpp"
#include "subnyq/sparse_model.hpp"

using namespace subnyq;

namespace {

CMatrix full_spark(Index p, Index m, std::uint64_t seed, Index want) {
  for (std::uint64_t t = 0;; ++t) {
    CMatrix a = make_cs_matrix(MatrixKind::Gaussian, p, m, derive_seed(seed, t));
    if (kruskal_rank(a) >= want) return a;
  }
}

}  // namespace

TEST_SUITE("ctf") {
  TEST_CASE("demodulate") {
    const FrequencyGrid g(8);
    Rng rng(1);
    const MeasurementBank y(random_complex_normal(rng, 3, 8));
    const CMatrix a = make_cs_matrix(MatrixKind::Gaussian, 3, 5, 2);
    CHECK(max_abs(CMatrix(demodulate(y, MeasurementDesign::plain(a, g)).values() - y.values())) < 1e-14);
    const MeasurementDesign twice(a, PeriodicMatrixFunction::constant(g, 2.0 * CMatrix::Identity(3, 3)));
    CHECK(max_abs(CMatrix(demodulate(y, twice).values() - 0.5 * y.values())) < 1e-14);

    const MeasurementDesign shaped(a, random_shaping_filter(3, g, 3));
    const CoefficientBank d(random_complex_normal(rng, 5, 8));
    const CMatrix direct = subnyq::apply(PeriodicMatrixFunction::constant(g, a), d.values());
    CHECK(max_abs(CMatrix(demodulate(compressive_sample(d, shaped), shaped).values() - direct)) < 1e-10);
  }

  TEST_CASE("compute_q") {
    CHECK(compute_q(MeasurementBank(CMatrix::Zero(3, 4))).isZero(0.0));
    CMatrix y(1, 2);
    y << Complex(1, 0), Complex(0, 1);
    const CMatrix q = compute_q(MeasurementBank(y));
    CHECK(q.rows() == 1);
    CHECK(std::abs(q(0, 0) - 2.0) < 1e-15);

    Rng rng(4);
    const CMatrix a = make_cs_matrix(MatrixKind::Gaussian, 5, 8, 5);
    CMatrix x = CMatrix::Zero(8, 20);
    x.row(2) = random_complex_normal(rng, 1, 20);
    x.row(6) = random_complex_normal(rng, 1, 20);
    const MeasurementBank yb(a * x);
    const RVector sv = singular_values(compute_q(yb));
    CHECK(sv(2) < 1e-10 * sv(0));
    CHECK(max_abs(CMatrix(compute_q_frequency(yb) - 20.0 * compute_q(yb))) < 1e-10 * max_abs(compute_q_frequency(yb)));
  }

  TEST_CASE("frame_from_q") {
    const Frame id = frame_from_q(CMatrix::Identity(2, 2));
    CHECK(id.v.cols() == 2);
    CHECK(max_abs(CMatrix(id.v * id.v.adjoint() - CMatrix::Identity(2, 2))) < 1e-14);
    CHECK(frame_from_q(CMatrix::Zero(3, 3)).v.cols() == 0);

    Rng rng(6);
    const CMatrix b = random_complex_normal(rng, 4, 2);
    const CMatrix q = b * b.adjoint();
    const Frame f = frame_from_q(q);
    CHECK(f.v.cols() == 2);
    CHECK((q - f.v * f.v.adjoint()).norm() <= 1e-9 * q.norm());
    // Span equals the top eigenvectors of Q (and the range of b).
    CHECK(oracle::row_reduction_rank(CMatrix((CMatrix(4, 4) << f.v, b).finished())) == 2);

    CMatrix indefinite = CMatrix::Identity(2, 2);
    indefinite(1, 1) = -1.0;
    CHECK_THROWS_AS(frame_from_q(indefinite), InvalidInput);
    CMatrix skew = CMatrix::Identity(2, 2);
    skew(0, 1) = 0.5;
    CHECK_THROWS_AS(frame_from_q(skew), InvalidInput);
  }

  TEST_CASE("exhaustive MMV") {
    const CMatrix a = full_spark(4, 6, 7, 4);
    CHECK(solve_mmv_exhaustive({a, a.col(2), 2}).support == Support{2});
    CHECK(solve_mmv_exhaustive({a, CMatrix::Zero(4, 1), 2}).support.empty());
    CHECK(solve_mmv_exhaustive({a, CMatrix(4, 0), 2}).support.empty());

    Rng rng(8);
    for (int t = 0; t < 20; ++t) {
      const Support s = rng.choose(6, 2);
      CMatrix u = CMatrix::Zero(6, 3);
      for (Index l : s) u.row(l) = random_complex_normal(rng, 1, 3);
      const CMatrix v = a * u;
      const MMVSolution sol = solve_mmv_exhaustive({a, v, 2});
      CHECK(sol.support == s);
      CHECK(sol.relative_residual < 1e-8);
      // Brute force with the normal-equation residual: only the planted support fits.
      for (Index k = 1; k <= 2; ++k)
        oracle::for_each_subset(6, k, [&](const std::vector<Index>& c) {
          if (c != s) CHECK(oracle::ls_residual(a, v, c) > 1e-8);
        });
      const auto fits = all_fitting_supports({a, v, 2});
      CHECK(fits.size() == 1);
    }

    CHECK_THROWS_AS(solve_mmv_exhaustive({a, random_complex_normal(rng, 4, 4), 1}), Infeasible);
    CHECK_THROWS_AS(solve_mmv_exhaustive({CMatrix::Ones(4, 60), CMatrix::Ones(4, 1), 10}), ProblemTooLarge);
  }

  TEST_CASE("exhaustive ties break lexicographically") {
    // Columns 0 and 1 identical: both explain V; the lower index wins.
    CMatrix a = CMatrix::Identity(3, 4);
    a.col(1) = a.col(0);
    CHECK(solve_mmv_exhaustive({a, a.col(0), 1}).support == Support{0});
  }

  TEST_CASE("SOMP") {
    const CMatrix a = full_spark(4, 6, 9, 4);
    CHECK(solve_mmv_somp({a, a.col(1), 1}).support == Support{1});
    CHECK(solve_mmv_somp({a, CMatrix::Zero(4, 2), 2}).support.empty());
    CMatrix tied = CMatrix::Identity(3, 4);
    tied.col(2) = tied.col(0);
    CHECK(solve_mmv_somp({tied, tied.col(0), 1}).support == Support{0});
    CHECK(parse_solver("somp") == Solver::Somp);
    CHECK_THROWS(parse_solver("lasso"));
  }

  TEST_CASE("recover_support: frame and design invariance") {
    const FrequencyGrid g(16);
    for (std::uint64_t s = 0; s < 10; ++s) {
      const CMatrix a = full_spark(4, 6, 100 + s, 4);
      const CoefficientBank d = synthesize(SparsityProfile(6, {0, 3}), 16, 200 + s);
      const MeasurementDesign plain = MeasurementDesign::plain(a, g);
      const MeasurementDesign shaped(a, random_shaping_filter(4, g, 300 + s), random_diagonal_filter(6, g, 400 + s));
      const SupportRecovery r1 = recover_support(compressive_sample(d, plain), plain, 2, Solver::Exhaustive);
      const SupportRecovery r2 = recover_support(compressive_sample(d, shaped), shaped, 2, Solver::Exhaustive);
      CHECK(r1.support == Support{0, 3});
      CHECK(r2.support == Support{0, 3});
      CHECK(r1.rank_q <= 2);
      Rng rng(500 + s);
      const CMatrix gmix = random_complex_normal(rng, r1.frame.cols(), r1.frame.cols());
      CHECK(solve_mmv_exhaustive({a, r1.frame * gmix, 2}).support == r1.support);
      const SupportRecovery rf =
          recover_support(compressive_sample(d, shaped), shaped, 2, Solver::Exhaustive, {}, QDomain::Frequency);
      CHECK(rf.support == r2.support);
    }
    const MeasurementDesign plain = MeasurementDesign::plain(full_spark(4, 6, 1, 4), g);
    CHECK(recover_support(MeasurementBank(CMatrix::Zero(4, 16)), plain, 2, Solver::Exhaustive).support.empty());
  }

  TEST_CASE("recover_coefficients") {
    const FrequencyGrid g(16);
    const CMatrix a = full_spark(4, 6, 11, 4);
    const MeasurementDesign d(a, random_shaping_filter(4, g, 12), random_diagonal_filter(6, g, 13));
    const CoefficientBank truth = synthesize(SparsityProfile(6, {1, 4}), 16, 14);
    const MeasurementBank y = compressive_sample(truth, d);
    CHECK(nmse(recover_coefficients(y, d, {1, 4}).values(), truth.values()) < 1e-18);
    CHECK(recover_coefficients(y, d, {}).values().isZero(0.0));
    const CoefficientBank wider = recover_coefficients(y, d, {1, 2, 4});
    CHECK(nmse(wider.values(), truth.values()) < 1e-18);
    CHECK(wider.values().row(2).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(wider.values().row(0).isZero(0.0));
    CMatrix dup = a;
    dup.col(2) = dup.col(1);
    CHECK_THROWS_AS(recover_coefficients(y, MeasurementDesign::plain(dup, g), {1, 2}), InvalidInput);
  }

  TEST_CASE("full recover with diagnostics") {
    const FrequencyGrid g(16);
    const MeasurementDesign d = MeasurementDesign::plain(full_spark(4, 6, 15, 4), g);
    const CoefficientBank truth = synthesize(SparsityProfile(6, {2, 5}), 16, 16);
    const RecoveryResult r = recover(compressive_sample(truth, d), d, 2, Solver::Somp);
    CHECK(r.support == Support{2, 5});
    CHECK(r.diagnostics.rank_q == 2);
    CHECK(r.diagnostics.solver == Solver::Somp);
    CHECK(r.diagnostics.residual < 1e-8);
    CHECK(r.diagnostics.q_eigenvalues.size() == 4);
    CHECK(nmse(r.coefficients.values(), truth.values()) < 1e-9);
  }
}
