// SPDX-License-Identifier: Apache-2.0
#include <functional>
#include <iomanip>
#include <sstream>

#include "subnyq/design_io.hpp"
#include "subnyq/dft.hpp"
#include "subnyq/experiment.hpp"
#include "subnyq/linalg.hpp"
#include "subnyq/random.hpp"
#include "subnyq/si_core.hpp"

namespace subnyq {

using nlohmann::json;

bool VerifyReport::all_passed() const {
  for (const CheckResult& c : checks)
    if (!c.passed) return false;
  return true;
}

namespace {

struct Outcome {
  bool passed;
  std::string detail;
};

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(3) << std::scientific << x;
  return os.str();
}

Outcome bound(double value, double limit, const std::string& what) {
  return {value <= limit, what + " = " + fmt(value) + " (limit " + fmt(limit) + ")"};
}

// A small random pipeline instance with an analog front end.
struct Planted {
  MeasurementDesign design;
  CoefficientBank truth;
  MeasurementBank y;
};

Planted planted(std::uint64_t seed, Index m, Index p, Index k, Index n, bool shaped, bool use_z) {
  const FrequencyGrid grid(n);
  CMatrix a;
  for (std::uint64_t attempt = 0;; ++attempt) {
    a = make_cs_matrix(MatrixKind::Gaussian, p, m, derive_seed(seed, 100 + attempt));
    if (kruskal_rank(a) >= std::min(p, 2 * k)) break;
  }
  PeriodicMatrixFunction w =
      shaped ? random_shaping_filter(p, grid, derive_seed(seed, 2)) : PeriodicMatrixFunction::identity(grid, p);
  std::optional<PeriodicMatrixFunction> z;
  if (use_z) z = random_diagonal_filter(m, grid, derive_seed(seed, 3));
  MeasurementDesign design(std::move(a), std::move(w), std::move(z));
  const GeneratorSet gens = random_bandlimited(grid, m, 1.0, derive_seed(seed, 4));
  const GeneratorSet filters = build_sampling_filters(design, biorthogonalize(gens, gens));
  Rng rng(derive_seed(seed, 5));
  CoefficientBank truth = synthesize(SparsityProfile(m, rng.choose(m, k)), n, derive_seed(seed, 6));
  MeasurementBank y = filterbank_sample(truth, cross_spectrum_matrix(filters, gens));
  return Planted{std::move(design), std::move(truth), std::move(y)};
}

Outcome cross_spectrum_oracle() {
  // Piecewise-constant pair against the directly summed correlation.
  const FrequencyGrid grid(5);
  Rng rng(11);
  const CMatrix sc = random_complex_normal(rng, 2, 15);
  const CMatrix ac = random_complex_normal(rng, 2, 15);
  const GeneratorSet s = GeneratorSet::piecewise_constant(grid, 2.0, 3, sc);
  const GeneratorSet a = GeneratorSet::piecewise_constant(grid, 2.0, 3, ac);
  double err = 0.0;
  for (Index i = 0; i < 2; ++i)
    for (Index l = 0; l < 2; ++l) {
      CVector r = CVector::Zero(5);
      for (Index n = 0; n < 5; ++n)
        for (Index c = 0; c < 15; ++c) r(n) += s.cell_width() * std::conj(sc(i, c)) * ac(l, (c + 3 * n) % 15);
      const CVector phi = cross_spectrum(s, i, a, l);
      for (Index q = 0; q < 5; ++q) err = std::max(err, std::abs(phi(q) - dtft(r, grid.point(q))));
    }
  // Bandlimited pair against the alias sum through evaluate().
  const GeneratorSet bs = random_bandlimited(grid, 2, 1.5, 12);
  const GeneratorSet ba = random_bandlimited(grid, 2, 1.5, 13);
  for (Index q = 0; q < 5; ++q) {
    Complex sum{0.0, 0.0};
    for (int j : bs.alias_support()) {
      const double w = (grid.point(q) - 2.0 * kPi * j) / 1.5;
      sum += std::conj(bs.evaluate(1, w)) * ba.evaluate(0, w);
    }
    err = std::max(err, std::abs(sum / 1.5 - cross_spectrum(bs, 1, ba, 0)(q)));
  }
  return bound(err, 1e-12, "max |phi - direct sum|");
}

Outcome riesz_basis() {
  const GeneratorSet gens = random_bandlimited(FrequencyGrid(8), 4, 1.0, 21);
  const RieszReport r = riesz_check(cross_spectrum_matrix(gens, gens), 1e-6, 1e6);
  MultibandScenario mb;
  const MultibandBuild b = build_multiband(mb);
  const RieszReport orth = riesz_check(cross_spectrum_matrix(b.generators, b.generators), 1.0 - 1e-12, 1.0 + 1e-12);
  return {r.holds && orth.holds, "random bounds [" + fmt(r.min_eigenvalue) + ", " + fmt(r.max_eigenvalue) +
                                     "], slice generators orthonormal: " + (orth.holds ? "yes" : "no")};
}

Outcome subspace_roundtrip() {
  const FrequencyGrid grid(16);
  const PeriodicMatrixFunction m_sa = random_shaping_filter(3, grid, 31);
  Rng rng(32);
  const CoefficientBank d(random_complex_normal(rng, 3, 16));
  const CoefficientBank back = reconstruct_subspace(filterbank_sample(d, m_sa), m_sa);
  return bound(max_abs(CMatrix(back.values() - d.values())), 1e-10, "max |d - reconstructed|");
}

Outcome support_exact() {
  const SparsityProfile profile(6, {0, 3});
  const CoefficientBank d = synthesize(profile, 32, 41);
  bool zeros = true;
  for (Index l : {1, 2, 4, 5}) zeros = zeros && d.values().row(l).isZero(0.0);
  return {d.support() == profile.support() && zeros, "support " + format_support(d.support())};
}

Outcome w_invertible(Fault fault) {
  const FrequencyGrid grid(8);
  PeriodicMatrixFunction w = random_shaping_filter(4, grid, 51);
  if (fault == Fault::SingularW) w[3].row(2).setZero();
  MeasurementDesign design(make_cs_matrix(MatrixKind::Gaussian, 4, 6, 52), std::move(w));
  try {
    design.validate();
  } catch (const DesignViolation& e) {
    return {false, e.what()};
  }
  return {true, "cond(W) <= " + fmt(condition_numbers(design.w()).maxCoeff())};
}

Outcome operator_identity() {
  double err = 0.0;
  for (std::uint64_t s = 0; s < 5; ++s) {
    const FrequencyGrid grid(12);
    MeasurementDesign design(make_cs_matrix(MatrixKind::Gaussian, 4, 7, derive_seed(61, s)),
                             random_shaping_filter(4, grid, derive_seed(62, s)),
                             random_diagonal_filter(7, grid, derive_seed(63, s)));
    const GeneratorSet gens = random_bandlimited(grid, 7, 1.0, derive_seed(64, s));
    const GeneratorSet filters = build_sampling_filters(design, biorthogonalize(gens, gens));
    err = std::max(err, (cross_spectrum_matrix(filters, gens) - combined_operator(design)).max_abs());
  }
  return bound(err, 1e-10, "max |M_SA - W A Z|");
}

Outcome biorthogonality() {
  double err = 0.0;
  for (std::uint64_t s = 0; s < 5; ++s) {
    const FrequencyGrid grid(10);
    const GeneratorSet gens = random_bandlimited(grid, 5, 1.0, derive_seed(71, s));
    const GeneratorSet h = random_bandlimited(grid, 5, 1.0, derive_seed(72, s));
    const GeneratorSet v = biorthogonalize(h, gens);
    err = std::max(err, (cross_spectrum_matrix(v, gens) - PeriodicMatrixFunction::identity(grid, 5)).max_abs());
  }
  return bound(err, 1e-10, "max |M_VA - I|");
}

Outcome kruskal() {
  const CMatrix f = make_cs_matrix(MatrixKind::FourierRows, 8, 13, 0, {1, 2, 3, 5, 7, 8, 11, 12});
  CMatrix dup = make_cs_matrix(MatrixKind::Gaussian, 4, 6, 81);
  dup.col(5) = dup.col(2);
  const Index kf = kruskal_rank(f);
  const Index kd = kruskal_rank(dup);
  return {kf == 8 && kd == 1, "Fourier rows (13 prime): " + std::to_string(kf) + ", repeated column: " +
                                  std::to_string(kd)};
}

Outcome design_round_trip() {
  const FrequencyGrid grid(6);
  const MeasurementDesign d(make_cs_matrix(MatrixKind::Gaussian, 3, 5, 91), random_shaping_filter(3, grid, 92),
                            random_diagonal_filter(5, grid, 93), MatrixKind::Gaussian, 91);
  const MeasurementDesign back = design_from_json(json::parse(design_to_json(d).dump()));
  bool same = back.a() == d.a() && back.z().has_value();
  for (Index q = 0; q < grid.size(); ++q) same = same && back.w()[q] == d.w()[q] && (*back.z())[q] == (*d.z())[q];
  return {same, same ? "bit-exact" : "mismatch after decode"};
}

Outcome rank_q_bound() {
  Index worst = 0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Planted pl = planted(derive_seed(101, s), 6, 4, 2, 16, true, false);
    const CMatrix q = compute_q(demodulate(pl.y, pl.design));
    worst = std::max(worst, numerical_rank(q, 1e-10));
  }
  return {worst <= 2, "max rank(Q) = " + std::to_string(worst) + " for k = 2"};
}

Outcome frame_invariance() {
  Index mismatches = 0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Planted pl = planted(derive_seed(111, s), 6, 4, 2, 16, false, false);
    const Frame f = frame_from_q(compute_q(pl.y));
    Rng rng(derive_seed(112, s));
    const CMatrix g = random_complex_normal(rng, f.v.cols(), f.v.cols());
    const Support s1 = solve_mmv_exhaustive({pl.design.a(), f.v, 2}).support;
    const Support s2 = solve_mmv_exhaustive({pl.design.a(), f.v * g, 2}).support;
    mismatches += s1 == s2 ? 0 : 1;
  }
  return {mismatches == 0, std::to_string(mismatches) + " of 10 supports changed under V -> V G"};
}

Outcome design_invariance() {
  double err = 0.0;
  Index mismatches = 0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const std::uint64_t seed = derive_seed(121, s);
    const Planted plain = planted(seed, 6, 4, 2, 16, false, false);
    const Planted shaped = planted(seed, 6, 4, 2, 16, true, true);
    const RecoveryResult a = recover(plain.y, plain.design, 2, Solver::Exhaustive);
    const RecoveryResult b = recover(shaped.y, shaped.design, 2, Solver::Exhaustive);
    mismatches += a.support == b.support ? 0 : 1;
    err = std::max(err, nmse(b.coefficients.values(), a.coefficients.values()));
  }
  Outcome o = bound(err, 1e-9, "max nmse between designs");
  o.passed = o.passed && mismatches == 0;
  o.detail += ", support mismatches " + std::to_string(mismatches);
  return o;
}

Outcome end_to_end() {
  double worst = 0.0;
  Index exact = 0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Planted pl = planted(derive_seed(131, s), 6, 4, 2, 16, true, true);
    const RecoveryResult r = recover(pl.y, pl.design, 2, Solver::Exhaustive);
    const double e = nmse(r.coefficients.values(), pl.truth.values());
    worst = std::max(worst, e);
    exact += (r.support == pl.truth.support() && e <= 1e-9) ? 1 : 0;
  }
  Outcome o = bound(worst, 1e-9, "max nmse");
  o.passed = o.passed && exact == 10;
  o.detail += ", exact " + std::to_string(exact) + "/10";
  return o;
}

Outcome q_domain() {
  const Planted pl = planted(141, 6, 4, 2, 16, true, false);
  const MeasurementBank yd = demodulate(pl.y, pl.design);
  const CMatrix qt = compute_q(yd);
  const CMatrix qf = compute_q_frequency(yd);
  const double rel = max_abs(CMatrix(qf - 16.0 * qt)) / max_abs(qf);
  const Support st = recover_support(pl.y, pl.design, 2, Solver::Exhaustive, {}, QDomain::Time).support;
  const Support sf = recover_support(pl.y, pl.design, 2, Solver::Exhaustive, {}, QDomain::Frequency).support;
  Outcome o = bound(rel, 1e-12, "|Q_freq - N Q_time| / |Q_freq|");
  o.passed = o.passed && st == sf;
  return o;
}

Outcome periodic_identity() {
  const PeriodicSparsityBuild b = build_periodic_sparsity(PeriodicSparsityScenario{});
  return bound(std::max(b.identity_error_via_g, b.identity_error_direct), 1e-10, "max |M_VA - I|");
}

Outcome periodic_waveform() {
  const PeriodicSparsityBuild b = build_periodic_sparsity(PeriodicSparsityScenario{});
  const WaveformReport w = piecewise_constant_waveform_check(b);
  Outcome o = bound(w.relative_error, 1e-6, "quadrature vs filter bank");
  o.passed = o.passed && w.baseline_error <= 1e-10;
  o.detail += ", baseline " + fmt(w.baseline_error);
  return o;
}

Outcome delay_filter() {
  const MultibandBuild b = build_multiband(MultibandScenario{});
  const DelayFilterReport r = delay_filter_equivalence_check(b);
  return bound(std::max(r.max_dense_deviation, r.max_grid_deviation), 1e-9, "max |G_i - exp(-j c_i w T)|");
}

Outcome fractional_delay() {
  Rng rng(151);
  const CMatrix y = random_complex_normal(rng, 1, 32);
  double err = 0.0;
  for (int c : {0, 1, 5, 12, 13})
    err = std::max(err, max_abs(CVector(fractional_delay_demodulate(y.row(0).transpose(), c, 13, 0.5) -
                                        fractional_delay_direct(y.row(0).transpose(), c, 13, 0.5))));
  return bound(err, 1e-8, "time chain vs frequency multiply");
}

Outcome multiband_recovery() {
  MultibandScenario sc;
  sc.seed = 161;
  const MultibandBuild b = build_multiband(sc);
  const MeasurementBank y = filterbank_sample(b.signal.coefficients, cross_spectrum_matrix(b.filters, b.generators));
  const RecoveryResult r = recover(y, b.design, b.k_max, Solver::Exhaustive);
  const double e = nmse(r.coefficients.values(), b.signal.coefficients.values());
  Outcome o = bound(e, 1e-9, "nmse");
  o.passed = o.passed && r.support == b.signal.profile.support();
  o.detail = "slices " + format_support(r.support) + ", " + o.detail;
  return o;
}

Outcome determinism() {
  ExperimentConfig c;
  c.trials = 4;
  c.seed = 171;
  c.w_kind = ShapingKind::Random;
  std::ostringstream a, b;
  write_trials_csv(run(c), a);
  write_trials_csv(run(c), b);
  const std::string header = a.str().substr(0, a.str().find('\n'));
  return {a.str() == b.str() && header == kTrialCsvHeader, a.str() == b.str() ? "byte-identical" : "outputs differ"};
}

}  // namespace

VerifyReport verify(Fault fault) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> suite{
      {"si_core.cross_spectrum", cross_spectrum_oracle},
      {"si_core.riesz_basis", riesz_basis},
      {"si_core.subspace_roundtrip", subspace_roundtrip},
      {"sparse_model.support_exact", support_exact},
      {"sampling_design.W_invertible", [fault] { return w_invertible(fault); }},
      {"sampling_design.operator_identity", operator_identity},
      {"sampling_design.biorthogonality", biorthogonality},
      {"sampling_design.kruskal_rank", kruskal},
      {"sampling_design.design_round_trip", design_round_trip},
      {"ctf.rank_q_bound", rank_q_bound},
      {"ctf.frame_invariance", frame_invariance},
      {"ctf.design_invariance", design_invariance},
      {"ctf.end_to_end_exact", end_to_end},
      {"ctf.q_domain_agreement", q_domain},
      {"scenarios.periodic_identity", periodic_identity},
      {"scenarios.periodic_waveform", periodic_waveform},
      {"scenarios.multiband_delay_filter", delay_filter},
      {"scenarios.fractional_delay_chain", fractional_delay},
      {"scenarios.multiband_recovery", multiband_recovery},
      {"cli.determinism", determinism},
  };
  VerifyReport report;
  for (const auto& [name, check] : suite) {
    try {
      const Outcome o = check();
      report.checks.push_back({name, o.passed, o.detail});
    } catch (const std::exception& e) {
      report.checks.push_back({name, false, std::string("threw: ") + e.what()});
    }
  }
  return report;
}

void print_report(const VerifyReport& report, std::ostream& os) {
  Index passed = 0;
  for (const CheckResult& c : report.checks) {
    os << (c.passed ? "PASS  " : "FAIL  ") << c.name << "  " << c.detail << '\n';
    passed += c.passed ? 1 : 0;
  }
  os << passed << '/' << report.checks.size() << " checks passed\n";
}

json report_json(const VerifyReport& report) {
  json checks = json::array();
  for (const CheckResult& c : report.checks)
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  return json{{"all_passed", report.all_passed()}, {"checks", checks}};
}

}  // namespace subnyq
