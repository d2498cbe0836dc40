// SPDX-License-Identifier: Apache-2.0
#include "subnyq/generator_set.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "subnyq/dft.hpp"
#include "subnyq/random.hpp"

namespace subnyq {

GeneratorSet GeneratorSet::bandlimited(FrequencyGrid grid, double period, std::vector<int> alias_support,
                                       std::vector<CMatrix> spectra, Evaluator evaluator) {
  if (!(period > 0.0)) throw InvalidInput("GeneratorSet: period must be positive");
  if (alias_support.empty()) throw InvalidInput("GeneratorSet: alias support must be non-empty");
  if (std::set<int>(alias_support.begin(), alias_support.end()).size() != alias_support.size())
    throw InvalidInput("GeneratorSet: alias support has duplicates");
  const auto j = static_cast<Index>(alias_support.size());
  for (const auto& s : spectra)
    if (s.rows() != grid.size() || s.cols() != j)
      throw DimensionError("GeneratorSet: each spectrum table must be N x |alias support|");
  GeneratorSet g(GeneratorKind::Bandlimited, grid, period, static_cast<Index>(spectra.size()));
  g.alias_support_ = std::move(alias_support);
  g.spectra_ = std::move(spectra);
  g.evaluator_ = std::move(evaluator);
  return g;
}

GeneratorSet GeneratorSet::piecewise_constant(FrequencyGrid grid, double period, Index cells_per_period,
                                              CMatrix cells) {
  if (!(period > 0.0)) throw InvalidInput("GeneratorSet: period must be positive");
  if (cells_per_period < 1) throw InvalidInput("GeneratorSet: need at least one cell per period");
  if (cells.cols() != grid.size() * cells_per_period)
    throw DimensionError("GeneratorSet: piecewise-constant sets need N * L cells per channel");
  GeneratorSet g(GeneratorKind::PiecewiseConstant, grid, period, cells.rows());
  g.cells_per_period_ = cells_per_period;
  g.cells_ = std::move(cells);
  return g;
}

const CMatrix& GeneratorSet::spectrum(Index channel) const {
  if (kind_ != GeneratorKind::Bandlimited) throw InvalidInput("GeneratorSet::spectrum: not a bandlimited set");
  return spectra_.at(static_cast<std::size_t>(channel));
}

const CMatrix& GeneratorSet::cells() const {
  if (kind_ != GeneratorKind::PiecewiseConstant)
    throw InvalidInput("GeneratorSet::cells: not a piecewise-constant set");
  return cells_;
}

Complex GeneratorSet::evaluate(Index channel, double omega) const {
  if (channel < 0 || channel >= count_) throw DimensionError("GeneratorSet::evaluate: channel out of range");
  if (kind_ == GeneratorKind::PiecewiseConstant) {
    const double w = cell_width();
    const Complex shape = omega == 0.0 ? Complex(w, 0.0) : (1.0 - std::polar(1.0, -omega * w)) / (kI * omega);
    Complex acc{0.0, 0.0};
    for (Index c = 0; c < cells_.cols(); ++c)
      if (cells_(channel, c) != 0.0) acc += cells_(channel, c) * std::polar(1.0, -omega * w * static_cast<double>(c));
    return acc * shape;
  }
  if (evaluator_) return evaluator_(channel, omega);

  // Table lookup: omega = w_q/T - 2 pi j/T with w_q in [0, 2 pi).
  const double theta = omega * period_;
  long j = -static_cast<long>(std::floor(theta / (2.0 * kPi)));
  const double wq = theta + 2.0 * kPi * static_cast<double>(j);
  const double qf = wq * static_cast<double>(grid_.size()) / (2.0 * kPi);
  long q = std::lround(qf);
  if (std::abs(qf - static_cast<double>(q)) > 1e-9 * std::max(1.0, std::abs(qf)))
    throw InvalidInput("GeneratorSet::evaluate: frequency is off the tabulated grid and no evaluator is attached");
  if (q == grid_.size()) {
    q = 0;
    j -= 1;
  }
  const auto it = std::find(alias_support_.begin(), alias_support_.end(), static_cast<int>(j));
  if (it == alias_support_.end()) return {0.0, 0.0};
  return spectra_[static_cast<std::size_t>(channel)](q, it - alias_support_.begin());
}

Complex GeneratorSet::value_at(Index channel, double t) const {
  if (kind_ != GeneratorKind::PiecewiseConstant) throw InvalidInput("GeneratorSet::value_at: not a piecewise-constant set");
  const Index total = cells_.cols();
  auto c = static_cast<Index>(std::floor(t / cell_width()));
  c %= total;
  if (c < 0) c += total;
  return cells_(channel, c);
}

GeneratorSet GeneratorSet::select(const Support& channels) const {
  for (Index c : channels)
    if (c < 0 || c >= count_) throw DimensionError("GeneratorSet::select: channel out of range");
  if (kind_ == GeneratorKind::PiecewiseConstant) {
    CMatrix cells(static_cast<Index>(channels.size()), cells_.cols());
    for (std::size_t i = 0; i < channels.size(); ++i) cells.row(static_cast<Index>(i)) = cells_.row(channels[i]);
    return piecewise_constant(grid_, period_, cells_per_period_, std::move(cells));
  }
  std::vector<CMatrix> spectra;
  for (Index c : channels) spectra.push_back(spectra_[static_cast<std::size_t>(c)]);
  Evaluator eval;
  if (evaluator_) {
    eval = [inner = evaluator_, channels](Index ch, double w) { return inner(channels.at(static_cast<std::size_t>(ch)), w); };
  }
  return bandlimited(grid_, period_, alias_support_, std::move(spectra), std::move(eval));
}

void GeneratorSet::require_compatible(const GeneratorSet& other) const {
  if (kind_ != other.kind_) throw DimensionError("generator sets of different kinds cannot be paired");
  if (!(grid_ == other.grid_)) throw DimensionError("generator sets live on different frequency grids");
  if (std::abs(period_ - other.period_) > 1e-12 * std::max(period_, other.period_))
    throw DimensionError("generator sets have different periods T");
  if (kind_ == GeneratorKind::Bandlimited && alias_support_ != other.alias_support_)
    throw DimensionError("generator sets have different alias supports");
  if (kind_ == GeneratorKind::PiecewiseConstant && cells_per_period_ != other.cells_per_period_)
    throw DimensionError("generator sets have different cell resolutions");
}

GeneratorSet mix(const PeriodicMatrixFunction& filter, const GeneratorSet& g) {
  if (!(filter.grid() == g.grid())) throw DimensionError("mix: filter and generators use different grids");
  if (filter.cols() != g.count()) throw DimensionError("mix: filter columns must equal the generator count");
  const Index n = g.grid().size();
  if (g.kind() == GeneratorKind::Bandlimited) {
    const auto j = static_cast<Index>(g.alias_support().size());
    std::vector<CMatrix> out(static_cast<std::size_t>(filter.rows()), CMatrix::Zero(n, j));
    for (Index q = 0; q < n; ++q)
      for (Index i = 0; i < filter.rows(); ++i)
        for (Index r = 0; r < g.count(); ++r)
          out[static_cast<std::size_t>(i)].row(q) += filter[q](i, r) * g.spectrum(r).row(q);
    return GeneratorSet::bandlimited(g.grid(), g.period(), g.alias_support(), std::move(out));
  }
  // Circular convolution of the upsampled taps with the cells, done on the
  // N*L-point DFT where the upsampled filter is C(e^{jw}) tiled L times.
  const Index total = g.cells().cols();
  const CMatrix g_hat = dft_rows(g.cells());
  CMatrix s_hat = CMatrix::Zero(filter.rows(), total);
  for (Index k = 0; k < total; ++k) s_hat.col(k) = filter[k % n] * g_hat.col(k);
  return GeneratorSet::piecewise_constant(g.grid(), g.period(), g.cells_per_period(), idft_rows(s_hat));
}

GeneratorSet random_bandlimited(const FrequencyGrid& grid, Index count, double period, std::uint64_t seed) {
  const Index j = count + 2;
  std::vector<int> aliases;
  for (Index a = 0; a < j; ++a) aliases.push_back(static_cast<int>(a - j / 2));
  Rng rng(seed);
  std::vector<CMatrix> spectra;
  for (Index l = 0; l < count; ++l) spectra.push_back(random_complex_normal(rng, grid.size(), j));
  return GeneratorSet::bandlimited(grid, period, std::move(aliases), std::move(spectra));
}

}  // namespace subnyq
