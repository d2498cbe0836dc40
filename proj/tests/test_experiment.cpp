// SPDX-License-Identifier: Apache-2.0
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "subnyq/experiment.hpp"

using namespace subnyq;
using nlohmann::json;

namespace {

std::string csv(const RunSummary& s) {
  std::ostringstream os;
  write_trials_csv(s, os);
  return os.str();
}

ExperimentConfig generic(Index trials) {
  return config_from_json(json{{"m", 6}, {"p", 4}, {"k", 2}, {"N", 16}, {"trials", trials}, {"seed", 3},
                               {"min_kruskal_rank", 4}});
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("config validation names the field") {
    auto message = [](const json& j) {
      try {
        config_from_json(j);
      } catch (const ConfigError& e) {
        return std::string(e.what());
      }
      return std::string();
    };
    CHECK(message(json{{"trials", 0}}).find("trials") == 0);
    CHECK(message(json{{"m", 3}, {"p", 4}}).find("p") == 0);
    CHECK(message(json{{"m", 3}, {"k", 4}, {"p", 2}}).find("k") == 0);
    CHECK(message(json{{"solver", "lasso"}}).find("solver") == 0);
    CHECK(message(json{{"colour", 1}}).find("colour") == 0);
    CHECK(message(json{{"m", "six"}}).find("m") == 0);
    CHECK(message(json{{"mode", "periodic_sparsity"}}).find("periodic") == 0);
    CHECK(message(json{{"tolerances", {{"bogus", 1.0}}}}).find("tolerances.bogus") == 0);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
  }

  TEST_CASE("config echo round-trips") {
    const ExperimentConfig c = generic(5);
    const ExperimentConfig back = config_from_json(to_json(c));
    CHECK(to_json(back) == to_json(c));
  }

  TEST_CASE("generic run recovers everything at sigma(A) = 4") {
    const RunSummary s = run(generic(20));
    CHECK(s.success_rate == 1.0);
    for (const TrialRecord& r : s.trials) {
      CHECK(r.nmse <= 1e-9);
      CHECK(r.sigma_a == 4);
      CHECK(r.rank_q <= 2);
      CHECK_FALSE(r.collision);
      CHECK(r.seed == trial_seed(3, r.trial));
    }
  }

  TEST_CASE("k = 0 trial") {
    ExperimentConfig c = generic(1);
    c.k = 0;
    const RunSummary s = run(c);
    CHECK(s.success_rate == 1.0);
    CHECK(s.trials[0].nmse == 0.0);
    CHECK(s.trials[0].support_found.empty());
  }

  TEST_CASE("determinism, thread independence and CSV schema") {
    ExperimentConfig c = generic(6);
    c.w_kind = ShapingKind::Random;
    c.use_z = true;
    const std::string a = csv(run(c));
    setenv("SI_SUBNYQ_THREADS", "1", 1);
    CHECK(worker_threads() == 1);
    const std::string b = csv(run(c));
    unsetenv("SI_SUBNYQ_THREADS");
    CHECK(a == b);
    CHECK(a.substr(0, a.find('\n')) == kTrialCsvHeader);
    CHECK(a.find("\"{") != std::string::npos);
  }

  TEST_CASE("collisions below the uniqueness rate") {
    ExperimentConfig c = config_from_json(json{{"m", 6}, {"p", 2}, {"k", 2}, {"N", 8}, {"trials", 10}, {"seed", 5}});
    const RunSummary s = run(c);
    CHECK(s.collisions > 0);
    CHECK(s.success_rate < 1.0);
  }

  TEST_CASE("sweep over one value equals run") {
    const ExperimentConfig c = generic(4);
    const auto points = sweep(c, SweepVar::P, {4});
    REQUIRE(points.size() == 1);
    CHECK(csv(points[0].summary) == csv(run(c)));
    std::ostringstream os;
    write_sweep_csv(points, os);
    CHECK(os.str().substr(0, os.str().find('\n')) == kSweepCsvHeader);
    CHECK(os.str().find("\n4,1,") != std::string::npos);
    CHECK_THROWS_AS(sweep(c, SweepVar::P, {7}), ConfigError);
    CHECK_THROWS_AS(parse_sweep_var("m"), ConfigError);
  }

  TEST_CASE("scenario modes run through the same pipeline") {
    const ExperimentConfig p = config_from_json(
        json{{"mode", "periodic_sparsity"}, {"trials", 3}, {"periodic", {{"m", 7}, {"pattern", {1, 4}}, {"p", 4}}}});
    CHECK(p.k == 2);
    const RunSummary ps = run(p);
    CHECK(ps.success_rate == 1.0);
    for (const TrialRecord& r : ps.trials) CHECK(r.support_found == Support{0, 3});

    const ExperimentConfig m = config_from_json(json{{"mode", "multiband"}, {"trials", 3}, {"multiband", json::object()}});
    CHECK(run(m).success_rate == 1.0);
  }

  TEST_CASE("outputs on disk") {
    namespace fs = std::filesystem;
    ExperimentConfig c = generic(2);
    c.out_dir = (fs::temp_directory_path() / "subnyq_test_out").string();
    const RunSummary s = run(c);
    write_run_outputs(s);
    std::ifstream js(fs::path(c.out_dir) / "summary.json");
    const json j = json::parse(js);
    CHECK(j["success_rate"] == 1.0);
    CHECK(j["config"]["m"] == 6);
    CHECK(fs::exists(fs::path(c.out_dir) / "trials.csv"));
    c.out_dir = "/proc/subnyq_cannot_write";
    CHECK_THROWS_AS(write_run_outputs(run(c)), ConfigError);
  }

  TEST_CASE("verify suite and negative control") {
    const VerifyReport ok = verify();
    CHECK(ok.checks.size() >= 12);
    CHECK(ok.all_passed());
    const VerifyReport bad = verify(Fault::SingularW);
    CHECK_FALSE(bad.all_passed());
    for (const CheckResult& r : bad.checks) CHECK(r.passed == (r.name != "sampling_design.W_invertible"));
    CHECK(report_json(bad)["all_passed"] == false);
  }
}
