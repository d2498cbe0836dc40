// SPDX-License-Identifier: Apache-2.0
#include "subnyq/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "subnyq/dft.hpp"
#include "subnyq/linalg.hpp"
#include "subnyq/random.hpp"
#include "subnyq/si_core.hpp"

namespace subnyq {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Periodic sparsity

void PeriodicSparsityScenario::validate() const {
  if (m < 1) throw InvalidInput("periodic sparsity: m must be positive");
  if (!(base_period > 0.0)) throw InvalidInput("periodic sparsity: base period must be positive");
  if (n_blocks < 1) throw InvalidInput("periodic sparsity: need at least one block");
  if (p < 1 || p > m) throw InvalidInput("periodic sparsity: need 1 <= p <= m");
  std::set<Index> seen;
  for (Index s : pattern) {
    if (s < 0 || s >= m) throw InvalidInput("periodic sparsity: pattern index " + std::to_string(s + 1) + " outside 1.." + std::to_string(m));
    if (!seen.insert(s).second) throw InvalidInput("periodic sparsity: pattern indices must be distinct");
  }
}

namespace {

// Cell layout shared by every piecewise-constant function below: cell c covers
// [c T', (c+1) T'), c = 0 .. n_blocks*m - 1, circular.

CMatrix shift_cells(const CMatrix& row, Index shift) {
  const Index total = row.cols();
  CMatrix out(1, total);
  for (Index c = 0; c < total; ++c) out(0, ((c + shift) % total + total) % total) = row(0, c);
  return out;
}

// Value of x(t) on cell c: sum_l sum_n d_l[n] a_l(t - nT), a_l piecewise
// constant on the same lattice, so x is constant on each cell.
CVector render_cells(const GeneratorSet& gens, const CoefficientBank& d) {
  const Index total = gens.cells().cols();
  const Index per = gens.cells_per_period();
  CVector x = CVector::Zero(total);
  for (Index l = 0; l < d.channels(); ++l)
    for (Index n = 0; n < d.length(); ++n) {
      const Complex coeff = d.values()(l, n);
      if (coeff == 0.0) continue;
      for (Index c = 0; c < total; ++c) {
        const Index src = ((c - n * per) % total + total) % total;
        x(c) += coeff * gens.cells()(l, src);
      }
    }
  return x;
}

// Composite trapezoid of conj(f(t - shift*w)) x(t) over the whole circle, with
// `subdivisions` panels per cell. Nodes on a cell edge take the one-sided limit
// from inside the cell being integrated.
Complex trapezoid_inner(const CMatrix& f_cells, Index f_row, Index shift_cells_count, const CVector& x_cells,
                        double cell_width, Index subdivisions) {
  const Index total = x_cells.size();
  const double h = cell_width / static_cast<double>(subdivisions);
  Complex acc{0.0, 0.0};
  for (Index c = 0; c < total; ++c) {
    const Index src = ((c - shift_cells_count) % total + total) % total;
    const Complex f = std::conj(f_cells(f_row, src));
    const Complex xv = x_cells(c);
    Complex cell{0.0, 0.0};
    for (Index u = 0; u <= subdivisions; ++u) {
      const double weight = (u == 0 || u == subdivisions) ? 0.5 : 1.0;
      cell += weight * f * xv;
    }
    acc += h * cell;
  }
  return acc;
}

}  // namespace

CVector interleave(const CoefficientBank& blocks) {
  const Index m = blocks.channels();
  CVector seq(m * blocks.length());
  for (Index n = 0; n < blocks.length(); ++n)
    for (Index l = 0; l < m; ++l) seq(n * m + l) = blocks.values()(l, n);
  return seq;
}

PeriodicSparsityBuild build_periodic_sparsity(const PeriodicSparsityScenario& sc) {
  sc.validate();
  const Index m = sc.m;
  const Index blocks = sc.n_blocks;
  const Index total = m * blocks;
  const double tp = sc.base_period;

  // Single-generator view at rate 1/T'.
  const FrequencyGrid fine(total);
  CMatrix box = CMatrix::Zero(1, total);
  box(0, 0) = 1.0;
  GeneratorSet prototype = GeneratorSet::piecewise_constant(fine, tp, 1, box);

  // q = a / phi_HA with h = a.
  const CVector phi = cross_spectrum(prototype, 0, prototype, 0);
  PeriodicMatrixFunction phi_fn(fine, 1, 1);
  for (Index q = 0; q < total; ++q) phi_fn[q](0, 0) = phi(q);
  GeneratorSet prefilter = mix(inverse(phi_fn, Tolerances{}.cond_tol, "phi_HA"), prototype);

  // m-generator reformulation at period T = m T'.
  const FrequencyGrid grid(blocks);
  CMatrix gen_cells = CMatrix::Zero(m, total);
  CMatrix bio_cells = CMatrix::Zero(m, total);
  for (Index l = 0; l < m; ++l) {
    gen_cells.row(l) = shift_cells(box, l);
    bio_cells.row(l) = shift_cells(prefilter.cells(), l);
  }
  GeneratorSet generators = GeneratorSet::piecewise_constant(grid, tp * static_cast<double>(m), m, gen_cells);
  GeneratorSet biorthogonal = GeneratorSet::piecewise_constant(grid, tp * static_cast<double>(m), m, bio_cells);

  // M_VA assembled from G(e^{jw}) = phi_QA at rate 1/T':
  // [M_VA]_il(w) = (1/m) e^{j(i-l)w/m} sum_r e^{-j(i-l)2 pi r/m} G(e^{j(w - 2 pi r)/m}).
  const CVector g = cross_spectrum(prefilter, 0, prototype, 0);
  double via_g = 0.0;
  for (Index q = 0; q < blocks; ++q) {
    const double w = grid.point(q);
    for (Index i = 0; i < m; ++i)
      for (Index l = 0; l < m; ++l) {
        const double d = static_cast<double>(i - l);
        Complex sum{0.0, 0.0};
        for (Index r = 0; r < m; ++r) {
          const Index idx = ((q - r * blocks) % total + total) % total;
          sum += std::polar(1.0, -d * 2.0 * kPi * static_cast<double>(r) / static_cast<double>(m)) * g(idx);
        }
        const Complex entry = std::polar(1.0, d * w / static_cast<double>(m)) * sum / static_cast<double>(m);
        via_g = std::max(via_g, std::abs(entry - (i == l ? 1.0 : 0.0)));
      }
  }
  const PeriodicMatrixFunction m_va = cross_spectrum_matrix(biorthogonal, generators);
  const double direct = (m_va - PeriodicMatrixFunction::identity(grid, m)).max_abs();

  CMatrix a = make_cs_matrix(sc.matrix_kind, sc.p, m, derive_seed(sc.seed, 1));
  MeasurementDesign design = MeasurementDesign::plain(std::move(a), grid, sc.matrix_kind, derive_seed(sc.seed, 1));
  GeneratorSet filters = build_sampling_filters(design, biorthogonal);

  SparsityProfile profile(m, sc.pattern);
  CoefficientBank coeffs = synthesize(profile, blocks, derive_seed(sc.seed, 2));
  CVector sequence = interleave(coeffs);
  SparseSISignal signal(std::move(profile), std::move(coeffs), generators);

  return PeriodicSparsityBuild{sc,
                               std::move(prototype),
                               std::move(prefilter),
                               std::move(generators),
                               std::move(biorthogonal),
                               std::move(filters),
                               std::move(design),
                               std::move(signal),
                               std::move(sequence),
                               via_g,
                               direct};
}

MeasurementBank quadrature_samples(const PeriodicSparsityBuild& build, const CoefficientBank& d, Index subdivisions) {
  if (subdivisions < 1) throw InvalidInput("quadrature_samples: need at least one panel per cell");
  const Index m = build.scenario.m;
  if (d.channels() != m || d.length() != build.scenario.n_blocks)
    throw DimensionError("quadrature_samples: coefficient bank does not match the scenario");
  const CVector x = render_cells(build.generators, d);
  const CMatrix& s = build.filters.cells();
  CMatrix y(build.filters.count(), d.length());
  for (Index i = 0; i < y.rows(); ++i)
    for (Index n = 0; n < y.cols(); ++n)
      y(i, n) = trapezoid_inner(s, i, n * m, x, build.scenario.base_period, subdivisions);
  return MeasurementBank(std::move(y));
}

CVector acquire_coefficients(const PeriodicSparsityBuild& build, const CoefficientBank& d, Index subdivisions) {
  const CVector x = render_cells(build.generators, d);
  CVector c(x.size());
  for (Index n = 0; n < x.size(); ++n)
    c(n) = trapezoid_inner(build.prefilter.cells(), 0, n, x, build.scenario.base_period, subdivisions);
  return c;
}

WaveformReport piecewise_constant_waveform_check(const PeriodicSparsityBuild& build, const CoefficientBank& d,
                                                 Index subdivisions) {
  MeasurementBank quad = quadrature_samples(build, d, subdivisions);
  MeasurementBank fb = compressive_sample(d, build.design);
  const double scale = max_abs(fb.values());
  const double diff = max_abs(CMatrix(quad.values() - fb.values()));
  const double baseline = max_abs(CVector(acquire_coefficients(build, d, subdivisions) - interleave(d)));
  return WaveformReport{std::move(quad), std::move(fb), scale > 0.0 ? diff / scale : diff, baseline,
                        static_cast<double>(build.scenario.p) / static_cast<double>(build.scenario.m)};
}

WaveformReport piecewise_constant_waveform_check(const PeriodicSparsityBuild& build, Index subdivisions) {
  return piecewise_constant_waveform_check(build, build.signal.coefficients, subdivisions);
}

// ---------------------------------------------------------------------------
// Multiband

void MultibandScenario::validate() const {
  if (n_bands < 1) throw InvalidInput("multiband: need at least one band");
  if (m < 1) throw InvalidInput("multiband: m must be positive");
  if (!(nyquist_period > 0.0)) throw InvalidInput("multiband: Nyquist period must be positive");
  if (length < 1) throw InvalidInput("multiband: sequence length must be positive");
  if (band_width < 0.0) throw InvalidInput("multiband: band width must be non-negative");
  // Each band must fit in at most two slices: m <= 2 pi / (B T).
  if (band_width > slice_width() * (1.0 + 1e-12))
    throw InvalidInput("multiband: m exceeds 2 pi / (B T), a band could cover more than two slices");
  if (cosets.empty() || p() > m) throw InvalidInput("multiband: need 1 <= p <= m cosets");
  std::set<int> residues;
  for (int c : cosets) {
    if (c < 0 || c > m) throw InvalidInput("multiband: coset offset " + std::to_string(c) + " outside 0.." + std::to_string(m));
    if (!residues.insert(static_cast<int>(c % m)).second)
      throw InvalidInput("multiband: coset offsets must be distinct modulo m");
  }
}

Complex multiband_slice(const MultibandScenario& sc, Index slice, double omega) {
  const double w = sc.slice_width();
  const double lo = w * static_cast<double>(slice);
  const double hi = w * static_cast<double>(slice + 1);
  if (omega >= lo && omega < hi) return {std::sqrt(static_cast<double>(sc.m) * sc.nyquist_period), 0.0};
  return {0.0, 0.0};
}

namespace {

// W_i(e^{j theta}) = e^{j c theta / m} / sqrt(T) for theta in [0, 2 pi).
Complex coset_shaping(int c, Index m, double nyquist_period, double theta) {
  return std::polar(1.0 / std::sqrt(nyquist_period), static_cast<double>(c) * theta / static_cast<double>(m));
}

}  // namespace

MultibandBuild build_multiband(const MultibandScenario& sc) {
  sc.validate();
  const Index m = sc.m;
  const double t = sc.nyquist_period;
  const double period = static_cast<double>(m) * t;
  const FrequencyGrid grid(sc.length);

  // Slice l lives entirely in alias j = -l of the period-mT lattice.
  std::vector<int> aliases(static_cast<std::size_t>(m));
  std::vector<CMatrix> spectra;
  for (Index l = 0; l < m; ++l) {
    aliases[static_cast<std::size_t>(l)] = -static_cast<int>(l);
    CMatrix table = CMatrix::Zero(sc.length, m);
    table.col(l).setConstant(std::sqrt(period));
    spectra.push_back(std::move(table));
  }
  GeneratorSet generators = GeneratorSet::bandlimited(
      grid, period, aliases, std::move(spectra), [sc](Index ch, double w) { return multiband_slice(sc, ch, w); });
  GeneratorSet biorthogonal = biorthogonalize(generators, generators);

  CMatrix a = make_cs_matrix(MatrixKind::FourierRows, sc.p(), m, 0, sc.cosets);
  const auto cosets = sc.cosets;
  PeriodicMatrixFunction w = PeriodicMatrixFunction::from_function(grid, sc.p(), sc.p(), [&](double theta) -> CMatrix {
    CVector diag(sc.p());
    for (Index i = 0; i < sc.p(); ++i) diag(i) = coset_shaping(cosets[static_cast<std::size_t>(i)], m, t, theta);
    return diag.asDiagonal();
  });
  MeasurementDesign design(std::move(a), std::move(w), std::nullopt, MatrixKind::FourierRows, sc.seed);
  GeneratorSet filters = build_sampling_filters(design, biorthogonal);

  // Bands of width B placed uniformly in [0, 2 pi / T); each covers the one or
  // two slices it overlaps.
  Rng rng(derive_seed(sc.seed, 11));
  const double width = sc.band_width > 0.0 ? sc.band_width : sc.slice_width();
  const double nyquist_band = 2.0 * kPi / t;
  std::vector<std::pair<double, double>> bands;
  std::set<Index> active;
  for (Index b = 0; b < sc.n_bands; ++b) {
    const double start = rng.uniform() * (nyquist_band - width);
    const double end = start + width;
    bands.emplace_back(start, end);
    const auto first = static_cast<Index>(std::floor(start / sc.slice_width()));
    auto last = static_cast<Index>(std::ceil(end / sc.slice_width())) - 1;
    last = std::min(last, m - 1);
    for (Index l = std::max<Index>(first, 0); l <= last; ++l) active.insert(l);
  }
  SparsityProfile profile(m, Support(active.begin(), active.end()));
  CoefficientBank coeffs = synthesize(profile, sc.length, derive_seed(sc.seed, 12));
  SparseSISignal signal(std::move(profile), std::move(coeffs), generators);

  return MultibandBuild{sc,
                        std::move(generators),
                        std::move(biorthogonal),
                        std::move(filters),
                        std::move(design),
                        std::move(signal),
                        std::move(bands),
                        std::min<Index>(2 * sc.n_bands, m)};
}

DelayFilterReport delay_filter_equivalence_check(const MultibandBuild& build, Index dense_points) {
  const MultibandScenario& sc = build.scenario;
  const Index m = sc.m;
  const double t = sc.nyquist_period;
  const CMatrix& a = build.design.a();
  DelayFilterReport report;
  report.dense_points = dense_points;

  // Dense sweep of G_i(w) = conj(W_i(e^{j w m T})) sum_l conj(A_il) A_l(w) on [0, 2 pi / T).
  for (Index u = 0; u < dense_points; ++u) {
    const double omega = 2.0 * kPi / t * static_cast<double>(u) / static_cast<double>(dense_points);
    const double scaled = omega * static_cast<double>(m) * t;
    const auto slice = std::min<Index>(static_cast<Index>(std::floor(scaled / (2.0 * kPi))), m - 1);
    const double theta = scaled - 2.0 * kPi * static_cast<double>(slice);
    for (Index i = 0; i < a.rows(); ++i) {
      const int c = sc.cosets[static_cast<std::size_t>(i)];
      Complex mixed{0.0, 0.0};
      for (Index l = 0; l < m; ++l) {
        const double lo = sc.slice_width() * static_cast<double>(l);
        // Slice membership decided by the same index as theta, so edges agree.
        const Complex al = (l == slice) ? multiband_slice(sc, l, std::max(omega, lo)) : Complex(0.0, 0.0);
        mixed += std::conj(a(i, l)) * al;
      }
      const Complex g = std::conj(coset_shaping(c, m, t, theta)) * mixed;
      const Complex target = std::polar(1.0, -static_cast<double>(c) * omega * t);
      report.max_dense_deviation = std::max(report.max_dense_deviation, std::abs(g - target));
    }
  }

  // Every tabulated point of the synthesized filters: w = (w_q + 2 pi l) / (mT) in slice l.
  const FrequencyGrid& grid = build.filters.grid();
  const auto& aliases = build.filters.alias_support();
  for (Index i = 0; i < build.filters.count(); ++i) {
    const int c = sc.cosets[static_cast<std::size_t>(i)];
    const CMatrix& table = build.filters.spectrum(i);
    for (Index q = 0; q < grid.size(); ++q)
      for (std::size_t j = 0; j < aliases.size(); ++j) {
        const double omega = (grid.point(q) - 2.0 * kPi * aliases[j]) / build.filters.period();
        if (omega < 0.0 || omega >= 2.0 * kPi / t) continue;
        const Complex target = std::polar(1.0, -static_cast<double>(c) * omega * t);
        report.max_grid_deviation =
            std::max(report.max_grid_deviation, std::abs(table(q, static_cast<Index>(j)) - target));
      }
  }
  return report;
}

CVector fractional_delay_demodulate(const CVector& y, int c, Index m, double nyquist_period) {
  const Index n = y.size();
  const Index up_len = n * m;
  CVector up = CVector::Zero(up_len);
  for (Index k = 0; k < n; ++k) up(k * m) = y(k);

  // Ideal low-pass on [0, 2 pi / m) with gain m removes the m - 1 images.
  CVector spectrum = dft(up);
  for (Index k = 0; k < up_len; ++k) spectrum(k) = k < n ? spectrum(k) * static_cast<double>(m) : Complex(0.0, 0.0);
  const CVector smooth = idft(spectrum);

  CVector out(n);
  for (Index k = 0; k < n; ++k) {
    const Index src = ((k * m - c) % up_len + up_len) % up_len;
    out(k) = smooth(src);
  }
  return out / std::sqrt(nyquist_period);
}

CVector fractional_delay_direct(const CVector& y, int c, Index m, double nyquist_period) {
  const FrequencyGrid grid(y.size());
  CVector f = dft(y);
  for (Index q = 0; q < f.size(); ++q)
    f(q) *= std::polar(1.0 / std::sqrt(nyquist_period), -static_cast<double>(c) * grid.point(q) / static_cast<double>(m));
  return idft(f);
}

// ---------------------------------------------------------------------------
// JSON

namespace {

template <typename T>
T field(const json& j, const char* name, T fallback) {
  if (!j.contains(name)) return fallback;
  try {
    return j.at(name).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("scenario field '") + name + "' has the wrong type");
  }
}

}  // namespace

PeriodicSparsityScenario periodic_from_json(const json& j) {
  PeriodicSparsityScenario sc;
  sc.m = field<Index>(j, "m", sc.m);
  if (j.contains("pattern")) {
    sc.pattern.clear();
    for (Index s : field<std::vector<Index>>(j, "pattern", {})) sc.pattern.push_back(s - 1);
  }
  sc.base_period = field<double>(j, "base_period", sc.base_period);
  sc.n_blocks = field<Index>(j, "n_blocks", sc.n_blocks);
  sc.p = field<Index>(j, "p", sc.p);
  sc.matrix_kind = parse_matrix_kind(field<std::string>(j, "matrix_kind", to_string(sc.matrix_kind)));
  sc.seed = field<std::uint64_t>(j, "seed", sc.seed);
  try {
    sc.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
  return sc;
}

MultibandScenario multiband_from_json(const json& j) {
  MultibandScenario sc;
  sc.n_bands = field<Index>(j, "n_bands", sc.n_bands);
  sc.band_width = field<double>(j, "band_width", sc.band_width);
  sc.m = field<Index>(j, "m", sc.m);
  sc.nyquist_period = field<double>(j, "nyquist_period", sc.nyquist_period);
  sc.cosets = field<std::vector<int>>(j, "cosets", sc.cosets);
  sc.length = field<Index>(j, "length", sc.length);
  sc.seed = field<std::uint64_t>(j, "seed", sc.seed);
  try {
    sc.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
  return sc;
}

json to_json(const PeriodicSparsityScenario& sc) {
  std::vector<Index> pattern;
  for (Index s : sc.pattern) pattern.push_back(s + 1);
  return json{{"m", sc.m},           {"pattern", pattern}, {"base_period", sc.base_period}, {"n_blocks", sc.n_blocks},
              {"p", sc.p},           {"matrix_kind", to_string(sc.matrix_kind)},          {"seed", sc.seed}};
}

json to_json(const MultibandScenario& sc) {
  return json{{"n_bands", sc.n_bands}, {"band_width", sc.band_width}, {"m", sc.m},
              {"nyquist_period", sc.nyquist_period}, {"cosets", sc.cosets}, {"length", sc.length},
              {"seed", sc.seed}};
}

}  // namespace subnyq
