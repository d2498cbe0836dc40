// SPDX-License-Identifier: Apache-2.0
#pragma once

// Experiment runner: builds designs or scenarios from a config, runs the
// sampling + recovery chain per trial, aggregates, and emits CSV / JSON.

#include <optional>
#include <ostream>

#include "json.hpp"
#include "subnyq/ctf.hpp"
#include "subnyq/scenarios.hpp"
#include "subnyq/sparse_model.hpp"

namespace subnyq {

enum class Mode { Generic, PeriodicSparsity, Multiband, Verify };

Mode parse_mode(const std::string& name);
std::string to_string(Mode mode);

enum class ShapingKind { Identity, Random };

struct ExperimentConfig {
  Mode mode = Mode::Generic;
  Index m = 6;
  Index k = 2;
  Index p = 4;
  Index n = 16;
  std::uint64_t seed = 1;
  Index trials = 1;
  MatrixKind matrix_kind = MatrixKind::Gaussian;
  Solver solver = Solver::Exhaustive;
  AmplitudeDistribution amplitude = AmplitudeDistribution::ComplexNormal;
  ShapingKind w_kind = ShapingKind::Identity;
  bool use_z = false;
  /// Redraw A until kruskal_rank(A) >= this (0 disables the filter).
  Index min_kruskal_rank = 0;
  /// Record measured wall time per trial (breaks byte-identical output).
  bool timing = false;
  Tolerances tolerances;
  std::optional<PeriodicSparsityScenario> periodic;
  std::optional<MultibandScenario> multiband;
  std::string out_dir = ".";

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);
nlohmann::json to_json(const ExperimentConfig& c);

struct TrialRecord {
  Index trial = 0;
  std::uint64_t seed = 0;
  Support support_true;
  Support support_found;
  bool exact = false;
  double nmse = 0.0;
  Index rank_q = 0;
  /// Kruskal rank of A; -1 when not computed.
  Index sigma_a = -1;
  double wall_time_s = 0.0;
  /// A different support of size <= k_max that also explains the data.
  bool collision = false;
};

struct RunSummary {
  ExperimentConfig config;
  std::vector<TrialRecord> trials;
  double success_rate = 0.0;
  double median_nmse = 0.0;
  Index collisions = 0;
};

/// Trial seeds: derive_seed(master, trial index).
std::uint64_t trial_seed(std::uint64_t master, Index trial);

/// One trial of the configured pipeline.
TrialRecord run_trial(const ExperimentConfig& config, Index trial);

/// All trials (in parallel per SI_SUBNYQ_THREADS; rows ordered by trial).
RunSummary run(const ExperimentConfig& config);

inline constexpr const char* kTrialCsvHeader =
    "trial,seed,support_true,support_found,exact,nmse,rank_q,sigma_a,wall_time_s";
inline constexpr const char* kSweepCsvHeader = "value,success_rate,median_nmse,trials";

void write_trials_csv(const RunSummary& summary, std::ostream& os);
nlohmann::json summary_json(const RunSummary& summary);
/// Writes trials.csv and summary.json into config.out_dir.
void write_run_outputs(const RunSummary& summary);

enum class SweepVar { P, K, N };
SweepVar parse_sweep_var(const std::string& name);

struct SweepPoint {
  Index value = 0;
  RunSummary summary;
};

std::vector<SweepPoint> sweep(const ExperimentConfig& config, SweepVar var, const std::vector<Index>& values);
void write_sweep_csv(const std::vector<SweepPoint>& points, std::ostream& os);

/// Thread count from SI_SUBNYQ_THREADS (0 or unset = hardware concurrency).
unsigned worker_threads();

// ---------------------------------------------------------------------------
// Invariant suite

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

enum class Fault { None, SingularW };

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool all_passed() const;
};

VerifyReport verify(Fault fault = Fault::None);
void print_report(const VerifyReport& report, std::ostream& os);
nlohmann::json report_json(const VerifyReport& report);

}  // namespace subnyq
