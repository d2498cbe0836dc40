// SPDX-License-Identifier: Apache-2.0
#include "subnyq/sparse_model.hpp"

#include <algorithm>

#include "subnyq/dft.hpp"
#include "subnyq/random.hpp"

namespace subnyq {

SparsityProfile::SparsityProfile(Index m, Support support) : m_(m), support_(std::move(support)) {
  if (m < 0) throw InvalidInput("SparsityProfile: m must be non-negative");
  std::sort(support_.begin(), support_.end());
  if (std::adjacent_find(support_.begin(), support_.end()) != support_.end())
    throw InvalidInput("SparsityProfile: support indices must be distinct");
  if (static_cast<Index>(support_.size()) > m) throw InvalidInput("SparsityProfile: k exceeds m");
  for (Index s : support_)
    if (s < 0 || s >= m) throw InvalidInput("SparsityProfile: support index " + std::to_string(s + 1) + " out of range 1.." + std::to_string(m));
}

AmplitudeDistribution parse_amplitude_distribution(const std::string& name) {
  if (name == "complex_normal") return AmplitudeDistribution::ComplexNormal;
  if (name == "real_normal") return AmplitudeDistribution::RealNormal;
  if (name == "unit_modulus") return AmplitudeDistribution::UnitModulus;
  throw ConfigError("unknown amplitude distribution '" + name + "'");
}

std::string to_string(AmplitudeDistribution d) {
  switch (d) {
    case AmplitudeDistribution::ComplexNormal: return "complex_normal";
    case AmplitudeDistribution::RealNormal: return "real_normal";
    case AmplitudeDistribution::UnitModulus: return "unit_modulus";
  }
  return "complex_normal";
}

namespace {

Complex draw(Rng& rng, AmplitudeDistribution dist) {
  switch (dist) {
    case AmplitudeDistribution::ComplexNormal: return rng.complex_normal();
    case AmplitudeDistribution::RealNormal: return {rng.normal(), 0.0};
    case AmplitudeDistribution::UnitModulus: return std::polar(1.0, 2.0 * kPi * rng.uniform());
  }
  return rng.complex_normal();
}

}  // namespace

CoefficientBank synthesize(const SparsityProfile& profile, Index length, std::uint64_t seed,
                           AmplitudeDistribution dist) {
  if (length < 1) throw InvalidInput("synthesize: N must be at least 1");
  Rng rng(seed);
  CMatrix values = CMatrix::Zero(profile.m(), length);
  for (Index ch : profile.support()) {
    do {
      for (Index n = 0; n < length; ++n) values(ch, n) = draw(rng, dist);
    } while (values.row(ch).squaredNorm() == 0.0);
  }
  return CoefficientBank(std::move(values), profile.support());
}

SparseSISignal::SparseSISignal(SparsityProfile profile_, CoefficientBank coefficients_, GeneratorSet generators_)
    : profile(std::move(profile_)), coefficients(std::move(coefficients_)), generators(std::move(generators_)) {
  if (coefficients.channels() != generators.count() || profile.m() != generators.count())
    throw DimensionError("SparseSISignal: coefficient, profile and generator counts differ");
  if (coefficients.support() != profile.support())
    throw InvalidInput("SparseSISignal: coefficient support differs from the profile support");
}

Complex signal_spectrum(const SparseSISignal& x, double omega) {
  const double theta = omega * x.generators.period();
  Complex acc{0.0, 0.0};
  for (Index ch : x.coefficients.support())
    acc += dtft(x.coefficients.values().row(ch).transpose(), theta) * x.generators.evaluate(ch, omega);
  return acc;
}

}  // namespace subnyq
