// SPDX-License-Identifier: Apache-2.0
// Acceptance run: one PASS/FAIL line per criterion, tolerances and time
// budgets fixed below. Exit status is the number of failed criteria.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>

#include "oracles.hpp"
#include "subnyq/ctf.hpp"
#include "subnyq/experiment.hpp"
#include "subnyq/linalg.hpp"
#include "subnyq/random.hpp"
#include "subnyq/scenarios.hpp"
#include "subnyq/si_core.hpp"

using namespace subnyq;

namespace {

struct Verdict {
  bool passed;
  std::string detail;
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

CMatrix spark_filtered(Index p, Index m, std::uint64_t seed, Index want) {
  for (std::uint64_t t = 0;; ++t) {
    CMatrix a = make_cs_matrix(MatrixKind::Gaussian, p, m, derive_seed(seed, t));
    if (kruskal_rank(a) >= want) return a;
  }
}

// y through the synthesized analog filters of a random generator set.
MeasurementBank analog_samples(const MeasurementDesign& d, const CoefficientBank& x, std::uint64_t seed) {
  const GeneratorSet gens = random_bandlimited(d.grid(), d.m(), 1.0, seed);
  const GeneratorSet filters = build_sampling_filters(d, biorthogonalize(gens, gens));
  return filterbank_sample(x, cross_spectrum_matrix(filters, gens));
}

// 1. m = 6, p = 4, k = 2, sigma(A) = 4, 100 instances through the full pipeline.
Verdict exact_recovery() {
  ExperimentConfig c;
  c.m = 6;
  c.p = 4;
  c.k = 2;
  c.n = 16;
  c.trials = 100;
  c.seed = 20261019;
  c.min_kruskal_rank = 4;
  c.w_kind = ShapingKind::Random;
  const RunSummary s = run(c);
  Index exact = 0;
  double worst = 0.0;
  for (const TrialRecord& r : s.trials) {
    exact += r.exact && r.nmse <= 1e-9 && r.sigma_a == 4 ? 1 : 0;
    worst = std::max(worst, r.nmse);
  }
  return {exact == 100, std::to_string(exact) + "/100 exact, max nmse " + sci(worst)};
}

// 2. M_SA recomputed from the synthesized filters equals W A.
Verdict operator_identity() {
  Rng rng(2);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const Index m = 2 + Index(rng.below(7));
    const Index p = 1 + Index(rng.below(std::uint64_t(std::min<Index>(6, m))));
    const Index n = 2 + Index(rng.below(31));
    const FrequencyGrid g(n);
    const MeasurementDesign d(make_cs_matrix(MatrixKind::Gaussian, p, m, rng.below(1u << 30)),
                              random_shaping_filter(p, g, rng.below(1u << 30)));
    const GeneratorSet gens = random_bandlimited(g, m, 0.5 + rng.uniform(), rng.below(1u << 30));
    const GeneratorSet s = build_sampling_filters(d, biorthogonalize(gens, gens));
    worst = std::max(worst, (cross_spectrum_matrix(s, gens) - d.w() * d.a()).max_abs());
  }
  return {worst <= 1e-10, "max |M_SA - W A| over 20 designs " + sci(worst) + " (limit 1e-10)"};
}

// 3. Biorthogonality for random admissible H.
Verdict biorthogonality() {
  Rng rng(3);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const Index m = 1 + Index(rng.below(8));
    const FrequencyGrid g(2 + Index(rng.below(31)));
    const GeneratorSet gens = random_bandlimited(g, m, 1.0, rng.below(1u << 30));
    const GeneratorSet h = random_bandlimited(g, m, 1.0, rng.below(1u << 30));
    const GeneratorSet v = biorthogonalize(h, gens);
    worst = std::max(worst, (cross_spectrum_matrix(v, gens) - PeriodicMatrixFunction::identity(g, m)).max_abs());
  }
  return {worst <= 1e-10, "max |M_VA - I| over 20 sets " + sci(worst) + " (limit 1e-10)"};
}

// 4. rank(Q) <= k; support invariant to frame choice and to W, Z.
Verdict ctf_correctness() {
  Index rank_bad = 0, frame_bad = 0, design_bad = 0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const FrequencyGrid g(16);
    const CMatrix a = spark_filtered(4, 6, derive_seed(40, s), 4);
    Rng rng(derive_seed(41, s));
    const CoefficientBank x = synthesize(SparsityProfile(6, rng.choose(6, 2)), 16, derive_seed(42, s));
    const MeasurementDesign plain = MeasurementDesign::plain(a, g);
    const MeasurementDesign shaped(a, random_shaping_filter(4, g, derive_seed(43, s)),
                                   random_diagonal_filter(6, g, derive_seed(44, s)));
    const SupportRecovery r1 = recover_support(analog_samples(plain, x, derive_seed(45, s)), plain, 2,
                                               Solver::Exhaustive);
    const SupportRecovery r2 = recover_support(analog_samples(shaped, x, derive_seed(46, s)), shaped, 2,
                                               Solver::Exhaustive);
    rank_bad += (r1.rank_q <= 2 && r2.rank_q <= 2) ? 0 : 1;
    const CMatrix mix = random_complex_normal(rng, r1.frame.cols(), r1.frame.cols());
    frame_bad += solve_mmv_exhaustive({a, r1.frame * mix, 2}).support == r1.support ? 0 : 1;
    design_bad += (r1.support == r2.support && r1.support == x.support()) ? 0 : 1;
  }
  return {rank_bad + frame_bad + design_bad == 0, "rank(Q) > k: " + std::to_string(rank_bad) +
                                                    ", frame changes: " + std::to_string(frame_bad) +
                                                    ", W/Z changes: " + std::to_string(design_bad) + " (50 seeds)"};
}

// 5. p = 2k with sigma(A) = 2k: exhaustive succeeds; no alternative support fits.
Verdict minimal_rate() {
  Index ok = 0, alternatives = 0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const Index k = 1 + Index(s % 3);
    const Index m = 8;
    const Index p = 2 * k;
    const FrequencyGrid g(12);
    const MeasurementDesign d = MeasurementDesign::plain(spark_filtered(p, m, derive_seed(50, s), p), g);
    Rng rng(derive_seed(51, s));
    const CoefficientBank x = synthesize(SparsityProfile(m, rng.choose(m, k)), 12, derive_seed(52, s));
    const MeasurementBank y = analog_samples(d, x, derive_seed(53, s));
    const RecoveryResult r = recover(y, d, k, Solver::Exhaustive);
    ok += (r.support == x.support() && nmse(r.coefficients.values(), x.values()) <= 1e-9) ? 1 : 0;
    const CMatrix v = frame_from_q(compute_q(y)).v;
    for (Index size = 1; size <= k; ++size)
      oracle::for_each_subset(m, size, [&](const std::vector<Index>& c) {
        if (c != x.support() && oracle::ls_residual(d.a(), v, c) <= 1e-8) ++alternatives;
      });
  }
  return {ok == 50 && alternatives == 0,
          std::to_string(ok) + "/50 exact at p = 2k, alternative fitting supports: " + std::to_string(alternatives)};
}

// 6. Multiband: delay filters, fractional-delay chain, slice recovery.
Verdict multiband() {
  double delay = 0.0, chain = 0.0;
  Index exact = 0, spark_ok = 0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    MultibandScenario sc;
    sc.n_bands = 2;
    sc.m = 13;
    sc.seed = derive_seed(60, s);
    Rng rng(derive_seed(61, s));
    sc.cosets.clear();
    for (Index c : rng.choose(13, 8)) sc.cosets.push_back(int(c));
    const MultibandBuild b = build_multiband(sc);
    spark_ok += kruskal_rank(b.design.a()) == 8 ? 1 : 0;
    const DelayFilterReport r = delay_filter_equivalence_check(b, 512);
    delay = std::max({delay, r.max_dense_deviation, r.max_grid_deviation});

    const MeasurementBank y = filterbank_sample(b.signal.coefficients, cross_spectrum_matrix(b.filters, b.generators));
    for (Index i = 0; i < y.channels(); ++i) {
      const CVector row = y.values().row(i).transpose();
      const int c = sc.cosets[std::size_t(i)];
      chain = std::max(chain, max_abs(CVector(fractional_delay_demodulate(row, c, 13, 1.0) -
                                              fractional_delay_direct(row, c, 13, 1.0))));
    }
    const RecoveryResult rec = recover(y, b.design, b.k_max, Solver::Exhaustive);
    exact += (rec.support == b.signal.profile.support() &&
              nmse(rec.coefficients.values(), b.signal.coefficients.values()) <= 1e-9)
                 ? 1
                 : 0;
  }
  return {delay <= 1e-9 && chain <= 1e-8 && exact == 50 && spark_ok == 50,
          "delay filter " + sci(delay) + " (limit 1e-9), chain vs multiply " + sci(chain) + " (limit 1e-8), " +
              std::to_string(exact) + "/50 exact, full spark " + std::to_string(spark_ok) + "/50"};
}

// 7. Periodic sparsity: quadrature vs filter bank, block pattern {1,4} mod 7.
Verdict periodic() {
  double worst = 0.0;
  Index pattern_ok = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    PeriodicSparsityScenario sc;
    sc.m = 7;
    sc.pattern = {0, 3};
    sc.p = 4;
    sc.seed = derive_seed(70, s);
    const PeriodicSparsityBuild b = build_periodic_sparsity(sc);
    const WaveformReport w = piecewise_constant_waveform_check(b, 64);
    worst = std::max(worst, w.relative_error);
    const RecoveryResult r = recover(w.quadrature, b.design, 2, Solver::Exhaustive);
    const CVector d = interleave(r.coefficients);
    bool ok = r.support == sc.pattern && nmse(r.coefficients.values(), b.signal.coefficients.values()) <= 1e-9;
    for (Index n = 0; n < d.size(); ++n)
      if (d(n) != 0.0 && n % 7 != 0 && n % 7 != 3) ok = false;
    pattern_ok += ok ? 1 : 0;
  }
  return {worst <= 1e-6 && pattern_ok == 20, "quadrature vs filter bank " + sci(worst) + " (limit 1e-6), " +
                                                 std::to_string(pattern_ok) + "/20 recovered on n = 1, 4 mod 7"};
}

// 8. SOMP against the exhaustive oracle.
Verdict somp_vs_l0() {
  Index eligible = 0, agree = 0, l0_fail = 0, somp_unclean = 0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const FrequencyGrid g(16);
    const MeasurementDesign d = MeasurementDesign::plain(make_cs_matrix(MatrixKind::Gaussian, 8, 20, derive_seed(80, s)), g);
    Rng rng(derive_seed(81, s));
    const CoefficientBank x = synthesize(SparsityProfile(20, rng.choose(20, 2)), 16, derive_seed(82, s));
    const MeasurementBank y = compressive_sample(x, d);
    const Frame f = frame_from_q(compute_q(y));
    const MMVProblem prob{d.a(), f.v, 2};
    MMVSolution l0;
    try {
      l0 = solve_mmv_exhaustive(prob);
    } catch (const Infeasible&) {
      ++l0_fail;
      continue;
    }
    if (l0.support != x.support()) {
      ++l0_fail;
      continue;
    }
    const MMVSolution g1 = solve_mmv_somp(prob);
    if (g1.relative_residual > 1e-8 || Index(g1.support.size()) > 2) {
      ++somp_unclean;
      continue;
    }
    ++eligible;
    agree += g1.support == l0.support ? 1 : 0;
  }
  const double rate = eligible ? double(agree) / double(eligible) : 0.0;
  std::ostringstream os;
  os << agree << "/" << eligible << " agree (" << sci(rate) << ", limit 0.95), SOMP unclean " << somp_unclean
     << ", l0 failures " << l0_fail << " of 200";
  return {eligible > 0 && rate >= 0.95, os.str()};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double budget_s;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria{
      {"1 exact recovery at guaranteed rates", 10.0, exact_recovery},
      {"2 operator identity M_SA = W A", 5.0, operator_identity},
      {"3 biorthogonality M_VA = I", 5.0, biorthogonality},
      {"4 CTF rank bound and invariances", 20.0, ctf_correctness},
      {"5 minimal-rate boundary p = 2k", 30.0, minimal_rate},
      {"6 multiband example", 30.0, multiband},
      {"7 periodic-sparsity example", 20.0, periodic},
      {"8 SOMP vs l0 oracle", 60.0, somp_vs_l0},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v{false, ""};
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = v.passed && secs <= c.budget_s;
    failed += ok ? 0 : 1;
    std::printf("%s  AC%s: %s [%.2f s, budget %.0f s]\n", ok ? "PASS" : "FAIL", c.name, v.detail.c_str(), secs,
                c.budget_s);
    std::fflush(stdout);
  }
  std::printf("%d/%zu acceptance criteria passed\n", int(criteria.size()) - failed, criteria.size());
  return failed;
}
