// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "subnyq/coefficient_bank.hpp"
#include "subnyq/generator_set.hpp"

namespace subnyq {

/// k active channels out of m.
class SparsityProfile {
 public:
  SparsityProfile(Index m, Support support);

  Index m() const { return m_; }
  Index k() const { return static_cast<Index>(support_.size()); }
  const Support& support() const { return support_; }

 private:
  Index m_;
  Support support_;
};

enum class AmplitudeDistribution { ComplexNormal, RealNormal, UnitModulus };

AmplitudeDistribution parse_amplitude_distribution(const std::string& name);
std::string to_string(AmplitudeDistribution d);

/// Seeded coefficient bank: i.i.d. draws on the active channels, exact zeros
/// elsewhere. An active channel that comes out all-zero is redrawn.
CoefficientBank synthesize(const SparsityProfile& profile, Index length, std::uint64_t seed,
                           AmplitudeDistribution dist = AmplitudeDistribution::ComplexNormal);

/// A member of the union of shift-invariant subspaces.
struct SparseSISignal {
  SparseSISignal(SparsityProfile profile, CoefficientBank coefficients, GeneratorSet generators);

  SparsityProfile profile;
  CoefficientBank coefficients;
  GeneratorSet generators;
};

/// X(omega) = sum_l D_l(e^{j omega T}) A_l(omega), D_l the DTFT of d_l.
Complex signal_spectrum(const SparseSISignal& x, double omega);

}  // namespace subnyq
