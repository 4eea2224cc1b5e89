// Command-line front end: vip run|validate|sweep|compare.

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "vip/harness.hpp"

namespace {

struct Common {
  std::string config;
  bool strict = false;
  std::string out;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("config", c.config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_flag("--strict", c.strict, "Refuse schedules for which convergence is not guaranteed");
  cmd->add_option("--out", c.out, "Output directory (overrides VIP_OUT_DIR and the config)");
  cmd->add_option("--seed", c.seed, "Seed for random perturbation directions");
}

vip::ConfigOverrides overrides(const Common& c, const CLI::App* cmd) {
  vip::ConfigOverrides ov;
  if (cmd->count("--seed") > 0) ov.seed = c.seed;
  if (!c.out.empty()) {
    ov.output = c.out;
  } else if (const char* env = std::getenv("VIP_OUT_DIR"); env != nullptr && *env != '\0') {
    ov.output = env;
  }
  return ov;
}

void print_summary(const vip::SummaryReport& s) {
  std::cout << vip::to_json(s).dump(2) << '\n';
  if (!s.conditions.applicable) {
    std::cerr << "warning: convergence conditions are not known to hold for these schedules\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid perturbed iteration for variational inequalities over fixed-point sets"};
  app.require_subcommand(1);

  Common run_opts;
  Common validate_opts;
  Common sweep_opts;
  std::vector<std::string> traces;

  auto* run = app.add_subcommand("run", "Run the experiment in the config's mode");
  add_common(run, run_opts);
  auto* validate = app.add_subcommand("validate", "Validate a config and decide the convergence conditions");
  add_common(validate, validate_opts);
  auto* sweep = app.add_subcommand("sweep", "Run an implicit or regularization sweep");
  add_common(sweep, sweep_opts);
  auto* compare = app.add_subcommand("compare", "Tabulate distance-to-reference across traces");
  compare->add_option("traces", traces, "Trace CSV files")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*compare) {
      std::vector<std::filesystem::path> paths(traces.begin(), traces.end());
      vip::print_table(vip::compare_runs(paths), std::cout);
      return 0;
    }

    const Common& c = *run ? run_opts : (*validate ? validate_opts : sweep_opts);
    const CLI::App* cmd = *run ? run : (*validate ? validate : sweep);
    std::optional<vip::ExperimentConfig> cfg;
    try {
      cfg.emplace(vip::load_config(c.config, overrides(c, cmd)));
    } catch (const vip::ConfigError& e) {
      std::cerr << "config invalid: " << e.what() << '\n';
      return vip::exit_code::kConfigInvalid;
    }
    if (*validate) cfg->mode = vip::Mode::Validate;
    if (*sweep && cfg->mode != vip::Mode::ImplicitSweep && cfg->mode != vip::Mode::RegularizationSweep) {
      std::cerr << "config invalid: mode must be implicit-sweep or regularization-sweep for 'sweep'\n";
      return vip::exit_code::kConfigInvalid;
    }
    vip::RunOptions opts;
    opts.strict = c.strict;
    const auto summary = vip::run_experiment(*cfg, opts);
    print_summary(summary);
    return summary.exit_code;
  } catch (const vip::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
