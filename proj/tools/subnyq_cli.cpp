// SPDX-License-Identifier: Apache-2.0
// subnyq: run, sweep and verify the compressive SI sampling pipeline.

#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "subnyq/experiment.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kConfigError = 2;

std::vector<subnyq::Index> parse_values(const std::string& csv) {
  std::vector<subnyq::Index> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw subnyq::ConfigError("values: '" + item + "' is not an integer");
    out.push_back(v);
  }
  if (out.empty()) throw subnyq::ConfigError("values: empty list");
  return out;
}

int do_verify(bool as_json, subnyq::Fault fault) {
  const subnyq::VerifyReport report = subnyq::verify(fault);
  if (as_json)
    std::cout << subnyq::report_json(report).dump(2) << '\n';
  else
    subnyq::print_report(report, std::cout);
  return report.all_passed() ? kOk : kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compressive sampling of sparse shift-invariant signals"};
  app.require_subcommand(1);

  std::string config_path, out_dir, var, values;
  std::uint64_t seed = 0;
  bool as_json = false;
  std::string fault_name = "none";

  auto* run_cmd = app.add_subcommand("run", "Run the trials described by a config file");
  run_cmd->add_option("--config", config_path, "JSON config")->required();
  auto* out_opt = run_cmd->add_option("--out-dir", out_dir, "Directory for trials.csv and summary.json");
  auto* seed_opt = run_cmd->add_option("--seed", seed, "Override the master seed");

  auto* sweep_cmd = app.add_subcommand("sweep", "Rerun a config over a list of p, k or N values");
  sweep_cmd->add_option("--config", config_path, "JSON config")->required();
  sweep_cmd->add_option("--var", var, "p, k or N")->required();
  sweep_cmd->add_option("--values", values, "Comma-separated integers")->required();

  auto* verify_cmd = app.add_subcommand("verify", "Run the invariant suite");
  verify_cmd->add_flag("--json", as_json, "Emit the report as JSON");
  verify_cmd->add_option("--inject-fault", fault_name, "Negative control: none or singular-w")
      ->check(CLI::IsMember({"none", "singular-w"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*verify_cmd)
      return do_verify(as_json, fault_name == "singular-w" ? subnyq::Fault::SingularW : subnyq::Fault::None);

    subnyq::ExperimentConfig config = subnyq::load_config(config_path);
    if (*run_cmd) {
      if (config.mode == subnyq::Mode::Verify) return do_verify(false, subnyq::Fault::None);
      if (*out_opt) config.out_dir = out_dir;
      if (*seed_opt) config.seed = seed;
      const subnyq::RunSummary summary = subnyq::run(config);
      subnyq::write_run_outputs(summary);
      std::cout << "success_rate " << summary.success_rate << "  median_nmse " << summary.median_nmse
                << "  trials " << summary.trials.size() << "  collisions " << summary.collisions << '\n';
      return kOk;
    }
    const auto points = subnyq::sweep(config, subnyq::parse_sweep_var(var), parse_values(values));
    subnyq::write_sweep_csv(points, std::cout);
    return kOk;
  } catch (const subnyq::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
}
