// SPDX-License-Identifier: Apache-2.0
#pragma once

// The two worked configurations: periodic sparsity of a box-generated
// piecewise-constant signal, and multicoset sampling of a multiband signal.
// Both feed the generic sampling_design / ctf pipeline unchanged.

#include "json.hpp"
#include "subnyq/sampling_design.hpp"
#include "subnyq/sparse_model.hpp"

namespace subnyq {

// ---------------------------------------------------------------------------
// Periodic sparsity

/// x(t) = sum_n d[n] a(t - n T'), a = indicator of [0, T'). In every block of
/// m consecutive coefficients only the positions in `pattern` may be nonzero.
struct PeriodicSparsityScenario {
  Index m = 7;
  Support pattern{0, 3};  ///< 0-based positions within a block
  double base_period = 1.0;
  Index n_blocks = 8;
  Index p = 4;
  MatrixKind matrix_kind = MatrixKind::Gaussian;
  std::uint64_t seed = 1;

  Index k() const { return static_cast<Index>(pattern.size()); }
  void validate() const;
};

struct PeriodicSparsityBuild {
  PeriodicSparsityScenario scenario;
  /// Single generator a(t) at period T' over m * n_blocks cells.
  GeneratorSet prototype;
  /// q(t) = a(t) / phi_AA: the prefilter whose samples are the d[n].
  GeneratorSet prefilter;
  /// a_i(t) = a(t - i T'), period T = m T'.
  GeneratorSet generators;
  /// v_l(t) = q(t - l T').
  GeneratorSet biorthogonal;
  GeneratorSet filters;
  MeasurementDesign design;
  SparseSISignal signal;
  /// The interleaved sequence d[n] = d_{n mod m}[n / m].
  CVector sequence;
  /// max |M_VA - I| assembled from G(e^{jw}) = phi_QA at rate 1/T'.
  double identity_error_via_g = 0.0;
  /// max |M_VA - I| from cross_spectrum_matrix(v, a).
  double identity_error_direct = 0.0;
};

PeriodicSparsityBuild build_periodic_sparsity(const PeriodicSparsityScenario& sc);

/// y_i[n] = integral conj(s_i(t - nT)) x(t) dt by composite trapezoid with
/// `subdivisions` panels per cell (cell width T'), for an arbitrary
/// coefficient bank in the m-channel layout.
MeasurementBank quadrature_samples(const PeriodicSparsityBuild& build, const CoefficientBank& d,
                                   Index subdivisions = 64);

/// c[n] = <q(t - n T'), x(t)> by quadrature: the rate-1/T' baseline.
CVector acquire_coefficients(const PeriodicSparsityBuild& build, const CoefficientBank& d,
                             Index subdivisions = 64);

struct WaveformReport {
  MeasurementBank quadrature;
  MeasurementBank filterbank;
  /// max |quadrature - filterbank| / max |filterbank| (absolute when zero).
  double relative_error = 0.0;
  /// max |c[n] - d[n]| for the rate-1/T' baseline.
  double baseline_error = 0.0;
  /// p / m: compressed rate relative to the baseline.
  double compression_factor = 0.0;
};

WaveformReport piecewise_constant_waveform_check(const PeriodicSparsityBuild& build, Index subdivisions = 64);
WaveformReport piecewise_constant_waveform_check(const PeriodicSparsityBuild& build, const CoefficientBank& d,
                                                 Index subdivisions = 64);

/// Flattens an m-channel bank back to d[n] = d_{n mod m}[n / m].
CVector interleave(const CoefficientBank& blocks);

// ---------------------------------------------------------------------------
// Multiband

/// A complex signal bandlimited to [0, 2 pi / T) made of at most n_bands
/// bands of width <= band_width, sampled by p cosets c_i of the Nyquist grid.
struct MultibandScenario {
  Index n_bands = 2;
  double band_width = 0.0;  ///< rad/s; 0 means one slice width
  Index m = 13;
  double nyquist_period = 1.0;
  std::vector<int> cosets{1, 2, 3, 5, 7, 8, 11, 12};
  Index length = 16;
  std::uint64_t seed = 1;

  Index p() const { return static_cast<Index>(cosets.size()); }
  double slice_width() const { return 2.0 * kPi / (static_cast<double>(m) * nyquist_period); }
  void validate() const;
};

struct MultibandBuild {
  MultibandScenario scenario;
  /// A_i(omega) = sqrt(mT) on [2 pi i/(mT), 2 pi (i+1)/(mT)), period mT.
  GeneratorSet generators;
  GeneratorSet biorthogonal;
  GeneratorSet filters;
  MeasurementDesign design;
  SparseSISignal signal;
  /// [start, end) of each synthesized band, rad/s.
  std::vector<std::pair<double, double>> bands;
  Index k_max = 0;
};

/// Slice generator value A_i(omega) in closed form.
Complex multiband_slice(const MultibandScenario& sc, Index slice, double omega);

MultibandBuild build_multiband(const MultibandScenario& sc);

struct DelayFilterReport {
  /// max_i max_omega |G_i(omega) - exp(-j c_i omega T)| on the dense grid.
  double max_dense_deviation = 0.0;
  /// Same deviation over every tabulated (grid, alias) point of the filters.
  double max_grid_deviation = 0.0;
  Index dense_points = 0;
};

DelayFilterReport delay_filter_equivalence_check(const MultibandBuild& build, Index dense_points = 512);

/// Upsample by m, ideal circular low-pass on [0, 2 pi / m), delay by c
/// samples, downsample by m, scale by 1/sqrt(T).
CVector fractional_delay_demodulate(const CVector& y, int c, Index m, double nyquist_period);

/// Direct form of the same operator: Y~(w_q) = exp(-j c w_q / m) Y(w_q) / sqrt(T), w_q in [0, 2 pi).
CVector fractional_delay_direct(const CVector& y, int c, Index m, double nyquist_period);

// ---------------------------------------------------------------------------
// JSON configs (complex values as [re, im]; indices 1-based as in reports)

PeriodicSparsityScenario periodic_from_json(const nlohmann::json& j);
MultibandScenario multiband_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PeriodicSparsityScenario& sc);
nlohmann::json to_json(const MultibandScenario& sc);

}  // namespace subnyq
