// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"
#include "oracles.hpp"
#include "subnyq/generator_set.hpp"
#include "subnyq/random.hpp"
#include "subnyq/sparse_model.hpp"

using namespace subnyq;

TEST_SUITE("sparse_model") {
  TEST_CASE("profile validation") {
    CHECK_NOTHROW(SparsityProfile(6, {0, 3}));
    CHECK_THROWS_AS(SparsityProfile(6, {0, 6}), InvalidInput);
    CHECK_THROWS_AS(SparsityProfile(6, {2, 2}), InvalidInput);
    CHECK_THROWS_AS(SparsityProfile(2, {0, 1, 1}), InvalidInput);
  }

  TEST_CASE("k = 0 gives an all-zero bank") {
    const CoefficientBank d = synthesize(SparsityProfile(5, {}), 8, 1);
    CHECK(d.support().empty());
    CHECK(d.values().isZero(0.0));
  }

  TEST_CASE("synthesize is deterministic and support honest") {
    const SparsityProfile profile(6, {1, 4});
    const CoefficientBank a = synthesize(profile, 16, 7);
    const CoefficientBank b = synthesize(profile, 16, 7);
    CHECK(a.values() == b.values());
    CHECK(a.support() == profile.support());
    for (Index l : {0, 2, 3, 5}) CHECK(a.channel_energy(l) == 0.0);
    CHECK(a.channel_energy(1) > 0.0);
    CHECK_FALSE(synthesize(profile, 16, 8).values() == a.values());
  }

  TEST_CASE("amplitude distributions") {
    const SparsityProfile profile(3, {0, 1, 2});
    const CMatrix r = synthesize(profile, 64, 3, AmplitudeDistribution::RealNormal).values();
    CHECK(r.imag().isZero(0.0));
    const CMatrix u = synthesize(profile, 64, 3, AmplitudeDistribution::UnitModulus).values();
    CHECK((u.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-14);
    CHECK(parse_amplitude_distribution(to_string(AmplitudeDistribution::UnitModulus)) ==
          AmplitudeDistribution::UnitModulus);
    CHECK_THROWS(parse_amplitude_distribution("laplace"));
  }

  TEST_CASE("coefficient bank bookkeeping") {
    CMatrix v = CMatrix::Zero(4, 3);
    v(2, 1) = 1.0;
    CHECK(CoefficientBank(v).support() == Support{2});
    CHECK_THROWS_AS(CoefficientBank(v, Support{1}), InvalidInput);
    CHECK(format_support({0, 3}) == "{1,4}");
    CHECK(format_support({}) == "{}");
    CHECK(nmse(CMatrix::Zero(2, 2), CMatrix::Zero(2, 2)) == 0.0);
    CHECK(std::isinf(nmse(CMatrix::Ones(2, 2), CMatrix::Zero(2, 2))));
  }

  TEST_CASE("signal_spectrum: zero, sifting, DFT oracle, linearity") {
    const FrequencyGrid g(8);
    const GeneratorSet gens = random_bandlimited(g, 3, 2.0, 5);
    const SparseSISignal zero(SparsityProfile(3, {}), CoefficientBank(3, 8), gens);
    CHECK(signal_spectrum(zero, 0.7) == Complex(0.0, 0.0));

    CMatrix imp = CMatrix::Zero(3, 8);
    imp(0, 0) = 1.0;
    const SparseSISignal one(SparsityProfile(3, {0}), CoefficientBank(imp), gens);
    for (int j : gens.alias_support()) {
      const double w = (g.point(3) - 2.0 * kPi * j) / 2.0;
      CHECK(std::abs(signal_spectrum(one, w) - gens.evaluate(0, w)) < 1e-14);
    }

    const SparsityProfile profile(3, {0, 2});
    const CoefficientBank d1 = synthesize(profile, 8, 6);
    const CoefficientBank d2 = synthesize(profile, 8, 7);
    const SparseSISignal x(profile, d1, gens);
    for (Index q = 0; q < 8; ++q)
      for (int j : gens.alias_support()) {
        const double w = (g.point(q) - 2.0 * kPi * j) / 2.0;
        Complex ref{0.0, 0.0};
        for (Index l : profile.support())
          ref += oracle::naive_dft(d1.values().row(l).transpose())(q) * gens.evaluate(l, w);
        CHECK(std::abs(signal_spectrum(x, w) - ref) < 1e-12 * std::max(1.0, std::abs(ref)));
      }

    Rng rng(9);
    const SparseSISignal y(profile, d2, gens);
    const SparseSISignal sum(profile, CoefficientBank(CMatrix(d1.values() + 2.0 * d2.values())), gens);
    for (int t = 0; t < 10; ++t) {
      const double w = g.point(Index(rng.below(8))) / 2.0 - kPi * double(int(rng.below(3)) - 1);
      const Complex lhs = signal_spectrum(sum, w);
      const Complex rhs = signal_spectrum(x, w) + 2.0 * signal_spectrum(y, w);
      CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
    }
  }

  TEST_CASE("signal consistency is enforced") {
    const GeneratorSet gens = random_bandlimited(FrequencyGrid(8), 3, 1.0, 5);
    const SparsityProfile profile(3, {0});
    CHECK_THROWS(SparseSISignal(profile, synthesize(SparsityProfile(3, {1}), 8, 1), gens));
    CHECK_THROWS(SparseSISignal(SparsityProfile(4, {0}), synthesize(SparsityProfile(4, {0}), 8, 1), gens));
  }

  TEST_CASE("rng helpers") {
    Rng a(1), b(1);
    CHECK(a.choose(10, 4) == b.choose(10, 4));
    Rng c(2);
    const Support s = c.choose(10, 10);
    CHECK(s.size() == 10);
    CHECK(std::is_sorted(s.begin(), s.end()));
    CHECK(derive_seed(5, 1) != derive_seed(5, 2));
    CHECK(derive_seed(5, 1) == derive_seed(5, 1));
  }
}
