// SPDX-License-Identifier: Apache-2.0
#include "subnyq/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "combinations.hpp"
#include "subnyq/random.hpp"
#include "subnyq/si_core.hpp"

namespace subnyq {

using nlohmann::json;

Mode parse_mode(const std::string& name) {
  if (name == "generic") return Mode::Generic;
  if (name == "periodic_sparsity") return Mode::PeriodicSparsity;
  if (name == "multiband") return Mode::Multiband;
  if (name == "verify") return Mode::Verify;
  throw ConfigError("mode: unknown value '" + name + "'");
}

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::Generic: return "generic";
    case Mode::PeriodicSparsity: return "periodic_sparsity";
    case Mode::Multiband: return "multiband";
    case Mode::Verify: return "verify";
  }
  return "generic";
}

namespace {

ShapingKind parse_shaping(const std::string& name) {
  if (name == "identity") return ShapingKind::Identity;
  if (name == "random") return ShapingKind::Random;
  throw ConfigError("w_kind: unknown value '" + name + "'");
}

std::string to_string(ShapingKind k) { return k == ShapingKind::Identity ? "identity" : "random"; }

void require(bool ok, const std::string& field, const std::string& why) {
  if (!ok) throw ConfigError(field + ": " + why);
}

template <typename T>
T get(const json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ConfigError(key + ": wrong type");
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  require(trials >= 1, "trials", "must be at least 1");
  require(m >= 1, "m", "must be positive");
  require(p >= 1, "p", "must be positive");
  require(p <= m, "p", "must not exceed m");
  require(k >= 0, "k", "must be non-negative");
  require(k <= m, "k", "must not exceed m");
  require(n >= 1, "N", "must be positive");
  require(min_kruskal_rank >= 0 && min_kruskal_rank <= p, "min_kruskal_rank", "must lie in 0..p");
  require(tolerances.residual_tol > 0.0 && tolerances.cond_tol > 1.0, "tolerances", "thresholds must be positive");
  if (mode == Mode::PeriodicSparsity) {
    require(periodic.has_value(), "periodic", "required for mode periodic_sparsity");
    try {
      periodic->validate();
    } catch (const InvalidInput& e) {
      throw ConfigError(std::string("periodic: ") + e.what());
    }
  }
  if (mode == Mode::Multiband) {
    require(multiband.has_value(), "multiband", "required for mode multiband");
    try {
      multiband->validate();
    } catch (const InvalidInput& e) {
      throw ConfigError(std::string("multiband: ") + e.what());
    }
  }
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be a JSON object");
  ExperimentConfig c;
  for (const auto& [key, value] : j.items()) {
    if (key == "mode") c.mode = parse_mode(get<std::string>(value, key));
    else if (key == "m") c.m = get<Index>(value, key);
    else if (key == "k") c.k = get<Index>(value, key);
    else if (key == "p") c.p = get<Index>(value, key);
    else if (key == "N") c.n = get<Index>(value, key);
    else if (key == "seed") c.seed = get<std::uint64_t>(value, key);
    else if (key == "trials") c.trials = get<Index>(value, key);
    else if (key == "matrix_kind") {
      try {
        c.matrix_kind = parse_matrix_kind(get<std::string>(value, key));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("matrix_kind: ") + e.what());
      }
    } else if (key == "solver") {
      try {
        c.solver = parse_solver(get<std::string>(value, key));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("solver: ") + e.what());
      }
    } else if (key == "amplitude") {
      try {
        c.amplitude = parse_amplitude_distribution(get<std::string>(value, key));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("amplitude: ") + e.what());
      }
    } else if (key == "w_kind") c.w_kind = parse_shaping(get<std::string>(value, key));
    else if (key == "use_z") c.use_z = get<bool>(value, key);
    else if (key == "min_kruskal_rank") c.min_kruskal_rank = get<Index>(value, key);
    else if (key == "timing") c.timing = get<bool>(value, key);
    else if (key == "out_dir") c.out_dir = get<std::string>(value, key);
    else if (key == "periodic") c.periodic = periodic_from_json(value);
    else if (key == "multiband") c.multiband = multiband_from_json(value);
    else if (key == "tolerances") {
      if (!value.is_object()) throw ConfigError("tolerances: must be an object");
      Tolerances& t = c.tolerances;
      for (const auto& [tk, tv] : value.items()) {
        const double x = get<double>(tv, "tolerances." + tk);
        if (tk == "cond_tol") t.cond_tol = x;
        else if (tk == "hermitian_tol") t.hermitian_tol = x;
        else if (tk == "frame_rank_tol") t.frame_rank_tol = x;
        else if (tk == "psd_tol") t.psd_tol = x;
        else if (tk == "rank_tol") t.rank_tol = x;
        else if (tk == "residual_tol") t.residual_tol = x;
        else if (tk == "success_nmse") t.success_nmse = x;
        else if (tk == "zero_signal_tol") t.zero_signal_tol = x;
        else throw ConfigError("tolerances." + tk + ": unknown field");
      }
    } else {
      throw ConfigError(key + ": unknown field");
    }
  }
  // Scenario modes take their dimensions from the scenario block.
  if (c.mode == Mode::PeriodicSparsity && c.periodic) {
    c.m = c.periodic->m;
    c.p = c.periodic->p;
    c.k = c.periodic->k();
    c.n = c.periodic->n_blocks;
    c.matrix_kind = c.periodic->matrix_kind;
  }
  if (c.mode == Mode::Multiband && c.multiband) {
    c.m = c.multiband->m;
    c.p = c.multiband->p();
    c.k = std::min<Index>(2 * c.multiband->n_bands, c.multiband->m);
    c.n = c.multiband->length;
    c.matrix_kind = MatrixKind::FourierRows;
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config: " + path + " is not valid JSON (" + e.what() + ")");
  }
  return config_from_json(j);
}

json to_json(const ExperimentConfig& c) {
  json j{{"mode", to_string(c.mode)},
         {"m", c.m},
         {"k", c.k},
         {"p", c.p},
         {"N", c.n},
         {"seed", c.seed},
         {"trials", c.trials},
         {"matrix_kind", to_string(c.matrix_kind)},
         {"solver", to_string(c.solver)},
         {"amplitude", to_string(c.amplitude)},
         {"w_kind", to_string(c.w_kind)},
         {"use_z", c.use_z},
         {"min_kruskal_rank", c.min_kruskal_rank},
         {"timing", c.timing},
         {"tolerances",
          {{"cond_tol", c.tolerances.cond_tol},
           {"hermitian_tol", c.tolerances.hermitian_tol},
           {"frame_rank_tol", c.tolerances.frame_rank_tol},
           {"psd_tol", c.tolerances.psd_tol},
           {"rank_tol", c.tolerances.rank_tol},
           {"residual_tol", c.tolerances.residual_tol},
           {"success_nmse", c.tolerances.success_nmse},
           {"zero_signal_tol", c.tolerances.zero_signal_tol}}}};
  if (c.periodic) j["periodic"] = to_json(*c.periodic);
  if (c.multiband) j["multiband"] = to_json(*c.multiband);
  return j;
}

std::uint64_t trial_seed(std::uint64_t master, Index trial) {
  return derive_seed(master, static_cast<std::uint64_t>(trial));
}

namespace {

// Kruskal rank is reported only when the subset enumeration stays small.
constexpr double kSigmaBudget = 20000.0;

Index maybe_kruskal(const CMatrix& a, double rank_tol) {
  double subsets = 0.0;
  for (Index q = 1; q <= std::min(a.rows(), a.cols()); ++q) subsets += detail::binomial(a.cols(), q);
  if (a.cols() > kKruskalMaxColumns || subsets > kSigmaBudget) return -1;
  return kruskal_rank(a, rank_tol);
}

struct Instance {
  MeasurementDesign design;
  CoefficientBank truth;
  MeasurementBank y;
  Index k_max;
  Index sigma_a;
};

Instance generic_instance(const ExperimentConfig& c, std::uint64_t seed) {
  const FrequencyGrid grid(c.n);
  CMatrix a;
  Index sigma = -1;
  for (std::uint64_t attempt = 0;; ++attempt) {
    if (attempt >= 10000)
      throw ConfigError("min_kruskal_rank: no matrix with Kruskal rank " + std::to_string(c.min_kruskal_rank) +
                        " found in 10000 draws");
    a = make_cs_matrix(c.matrix_kind, c.p, c.m, derive_seed(seed, 100 + attempt));
    if (c.min_kruskal_rank == 0) {
      sigma = maybe_kruskal(a, c.tolerances.rank_tol);
      break;
    }
    sigma = kruskal_rank(a, c.tolerances.rank_tol);
    if (sigma >= c.min_kruskal_rank) break;
  }
  PeriodicMatrixFunction w = c.w_kind == ShapingKind::Random ? random_shaping_filter(c.p, grid, derive_seed(seed, 2))
                                                             : PeriodicMatrixFunction::identity(grid, c.p);
  std::optional<PeriodicMatrixFunction> z;
  if (c.use_z) z = random_diagonal_filter(c.m, grid, derive_seed(seed, 3));
  MeasurementDesign design(std::move(a), std::move(w), std::move(z), c.matrix_kind, seed);
  design.validate(c.tolerances);

  // Analog path: random generators, their dual, the synthesized filters, and
  // samples taken through the filters' cross-spectra.
  GeneratorSet gens = random_bandlimited(grid, c.m, 1.0, derive_seed(seed, 4));
  GeneratorSet dual = biorthogonalize(gens, gens, c.tolerances.cond_tol);
  GeneratorSet filters = build_sampling_filters(design, dual);

  Rng rng(derive_seed(seed, 5));
  SparsityProfile profile(c.m, rng.choose(c.m, c.k));
  CoefficientBank truth = synthesize(profile, c.n, derive_seed(seed, 6), c.amplitude);
  MeasurementBank y = filterbank_sample(truth, cross_spectrum_matrix(filters, gens));
  return Instance{std::move(design), std::move(truth), std::move(y), c.k, sigma};
}

Instance periodic_instance(const ExperimentConfig& c, std::uint64_t seed) {
  PeriodicSparsityScenario sc = *c.periodic;
  sc.seed = seed;
  PeriodicSparsityBuild b = build_periodic_sparsity(sc);
  b.design.validate(c.tolerances);
  MeasurementBank y = filterbank_sample(b.signal.coefficients, cross_spectrum_matrix(b.filters, b.generators));
  const Index sigma = maybe_kruskal(b.design.a(), c.tolerances.rank_tol);
  return Instance{b.design, b.signal.coefficients, std::move(y), sc.k(), sigma};
}

Instance multiband_instance(const ExperimentConfig& c, std::uint64_t seed) {
  MultibandScenario sc = *c.multiband;
  sc.seed = seed;
  MultibandBuild b = build_multiband(sc);
  b.design.validate(c.tolerances);
  MeasurementBank y = filterbank_sample(b.signal.coefficients, cross_spectrum_matrix(b.filters, b.generators));
  const Index sigma = maybe_kruskal(b.design.a(), c.tolerances.rank_tol);
  return Instance{b.design, b.signal.coefficients, std::move(y), b.k_max, sigma};
}

}  // namespace

TrialRecord run_trial(const ExperimentConfig& config, Index trial) {
  const auto start = std::chrono::steady_clock::now();
  TrialRecord rec;
  rec.trial = trial;
  rec.seed = trial_seed(config.seed, trial);

  Instance inst = [&] {
    switch (config.mode) {
      case Mode::PeriodicSparsity: return periodic_instance(config, rec.seed);
      case Mode::Multiband: return multiband_instance(config, rec.seed);
      case Mode::Generic: return generic_instance(config, rec.seed);
      case Mode::Verify: break;
    }
    throw ConfigError("mode: verify has no trials; use the verify command");
  }();
  rec.support_true = inst.truth.support();
  rec.sigma_a = inst.sigma_a;

  const Tolerances& tol = config.tolerances;
  try {
    RecoveryResult r = recover(inst.y, inst.design, inst.k_max, config.solver, tol);
    rec.support_found = r.support;
    rec.rank_q = r.diagnostics.rank_q;
    rec.nmse = nmse(r.coefficients.values(), inst.truth.values(), tol.zero_signal_tol);
  } catch (const Infeasible&) {
    rec.nmse = std::numeric_limits<double>::infinity();
  } catch (const InvalidInput&) {
    // A_S rank deficient for a wrong greedy support.
    rec.nmse = std::numeric_limits<double>::infinity();
  }
  rec.exact = rec.support_found == rec.support_true && rec.nmse <= tol.success_nmse;

  // Uniqueness audit: any other support within budget that fits the frame.
  if (config.solver == Solver::Exhaustive) {
    double subsets = 0.0;
    for (Index q = 0; q <= inst.k_max; ++q) subsets += detail::binomial(inst.design.m(), q);
    if (subsets <= 2e5) {
      const Frame f = frame_from_q(compute_q(demodulate(inst.y, inst.design, tol.cond_tol)), tol);
      for (const Support& s : all_fitting_supports(MMVProblem{inst.design.a(), f.v, inst.k_max}, tol)) {
        const bool superset = std::includes(s.begin(), s.end(), rec.support_true.begin(), rec.support_true.end());
        if (!superset) {
          rec.collision = true;
          break;
        }
      }
    }
  }
  if (config.timing)
    rec.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

unsigned worker_threads() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("SI_SUBNYQ_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(std::min<unsigned long>(v, hw));
  }
  return hw;
}

RunSummary run(const ExperimentConfig& config) {
  config.validate();
  RunSummary summary;
  summary.config = config;
  summary.trials.resize(static_cast<std::size_t>(config.trials));

  const unsigned threads = std::min<unsigned>(worker_threads(), static_cast<unsigned>(config.trials));
  std::atomic<Index> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (Index t = next++; t < config.trials; t = next++) {
      try {
        summary.trials[static_cast<std::size_t>(t)] = run_trial(config, t);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = config.trials;
      }
    }
  };
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  Index successes = 0;
  std::vector<double> errors;
  for (const TrialRecord& r : summary.trials) {
    successes += r.exact ? 1 : 0;
    summary.collisions += r.collision ? 1 : 0;
    errors.push_back(r.nmse);
  }
  std::sort(errors.begin(), errors.end());
  const std::size_t mid = errors.size() / 2;
  summary.median_nmse = errors.size() % 2 ? errors[mid] : 0.5 * (errors[mid - 1] + errors[mid]);
  summary.success_rate = static_cast<double>(successes) / static_cast<double>(config.trials);
  return summary;
}

namespace {

std::string number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

void write_trials_csv(const RunSummary& summary, std::ostream& os) {
  os << kTrialCsvHeader << '\n';
  for (const TrialRecord& r : summary.trials) {
    os << r.trial << ',' << r.seed << ",\"" << format_support(r.support_true) << "\",\""
       << format_support(r.support_found) << "\"," << (r.exact ? "true" : "false") << ',' << number(r.nmse) << ','
       << r.rank_q << ',' << r.sigma_a << ',' << number(r.wall_time_s) << '\n';
  }
}

json summary_json(const RunSummary& summary) {
  return json{{"success_rate", summary.success_rate},
              {"median_nmse", finite_or_null(summary.median_nmse)},
              {"trials", summary.trials.size()},
              {"collisions", summary.collisions},
              {"config", to_json(summary.config)}};
}

void write_run_outputs(const RunSummary& summary) {
  namespace fs = std::filesystem;
  const fs::path dir(summary.config.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  std::ofstream csv(dir / "trials.csv");
  if (!csv) throw ConfigError("out_dir: cannot write " + (dir / "trials.csv").string());
  write_trials_csv(summary, csv);
  std::ofstream js(dir / "summary.json");
  if (!js) throw ConfigError("out_dir: cannot write " + (dir / "summary.json").string());
  js << summary_json(summary).dump(2) << '\n';
}

SweepVar parse_sweep_var(const std::string& name) {
  if (name == "p") return SweepVar::P;
  if (name == "k") return SweepVar::K;
  if (name == "N") return SweepVar::N;
  throw ConfigError("var: expected p, k or N, got '" + name + "'");
}

namespace {

ExperimentConfig with_value(ExperimentConfig c, SweepVar var, Index value) {
  switch (var) {
    case SweepVar::P:
      c.p = value;
      if (c.periodic) c.periodic->p = value;
      if (c.mode == Mode::Multiband) {
        require(value >= 1 && value <= c.multiband->p(), "values", "p must lie in 1.." + std::to_string(c.multiband->p()));
        c.multiband->cosets.resize(static_cast<std::size_t>(value));
      }
      c.min_kruskal_rank = std::min(c.min_kruskal_rank, std::max<Index>(value, 0));
      break;
    case SweepVar::K:
      require(c.mode == Mode::Generic, "var", "k sweeps need mode generic");
      c.k = value;
      break;
    case SweepVar::N:
      c.n = value;
      if (c.periodic) c.periodic->n_blocks = value;
      if (c.multiband) c.multiband->length = value;
      break;
  }
  c.validate();
  return c;
}

}  // namespace

std::vector<SweepPoint> sweep(const ExperimentConfig& config, SweepVar var, const std::vector<Index>& values) {
  require(!values.empty(), "values", "need at least one value");
  std::vector<SweepPoint> points;
  for (Index v : values) points.push_back(SweepPoint{v, run(with_value(config, var, v))});
  return points;
}

void write_sweep_csv(const std::vector<SweepPoint>& points, std::ostream& os) {
  os << kSweepCsvHeader << '\n';
  for (const SweepPoint& pt : points)
    os << pt.value << ',' << number(pt.summary.success_rate) << ',' << number(pt.summary.median_nmse) << ','
       << pt.summary.trials.size() << '\n';
}

}  // namespace subnyq
