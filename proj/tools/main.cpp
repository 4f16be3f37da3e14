#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "cmefsp/config.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw cmefsp::ConfigError("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct RunFlags {
  std::string config_path;
  std::string out_dir;
  double alpha = -1.0;
  double dt = -1.0;
  double t_final = -1.0;
  std::int64_t seed = -1;
  std::int64_t snapshot_every = -1;
  std::string mode;
  std::string strategy;
  bool override_budget = false;
};

void apply_flags(cmefsp::RunConfig& config, const RunFlags& flags) {
  using namespace cmefsp;
  if (!flags.out_dir.empty()) config.output.dir = flags.out_dir;
  if (flags.alpha >= 0.0) {
    config.solver.alpha = flags.alpha;
    config.solver.eps_time = flags.alpha > 0.0 ? 2.0 * flags.alpha : config.solver.eps_time;
  }
  if (flags.dt > 0.0) config.solver.dt = flags.dt;
  if (flags.t_final > 0.0) config.solver.t_final = flags.t_final;
  if (flags.seed >= 0) {
    config.solver.seed = static_cast<std::uint64_t>(flags.seed);
    config.output.ssa.seed = static_cast<std::uint64_t>(flags.seed);
  }
  if (flags.snapshot_every >= 0) {
    config.solver.snapshot_every = static_cast<std::size_t>(flags.snapshot_every);
  }
  if (!flags.mode.empty()) {
    if (flags.mode == "closed") {
      config.solver.boundary = BoundaryMode::Closed;
    } else if (flags.mode == "absorbing") {
      config.solver.boundary = BoundaryMode::Absorbing;
    } else {
      throw ConfigError("--mode must be closed or absorbing");
    }
  }
  if (!flags.strategy.empty()) {
    if (flags.strategy == "quantile") {
      config.solver.strategy = PruneStrategy::Quantile;
    } else if (flags.strategy == "prune_to_mass") {
      config.solver.strategy = PruneStrategy::PruneToMass;
    } else if (flags.strategy == "fixed_threshold") {
      config.solver.strategy = PruneStrategy::FixedThreshold;
    } else if (flags.strategy == "none") {
      config.solver.strategy = PruneStrategy::None;
    } else {
      throw ConfigError("--strategy must be quantile, prune_to_mass, fixed_threshold or none");
    }
  }
  if (flags.override_budget) config.override_budget = true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive finite state projection solver for the chemical master equation"};
  app.require_subcommand(1);

  RunFlags flags;
  CLI::App* run_cmd = app.add_subcommand("run", "Execute a solver run from a config file");
  run_cmd->add_option("-c,--config", flags.config_path, "Config file (JSON)")->required();
  run_cmd->add_option("-o,--out", flags.out_dir, "Output directory (overrides config)");
  run_cmd->add_option("--alpha", flags.alpha, "Prune fraction (sets eps_time = 2*alpha)");
  run_cmd->add_option("--dt", flags.dt, "Time step");
  run_cmd->add_option("--t-final", flags.t_final, "Final time");
  run_cmd->add_option("--seed", flags.seed,
                      "Base seed (recorded in the run, drives the SSA comparison)");
  run_cmd->add_option("--mode", flags.mode, "Boundary mode: closed | absorbing");
  run_cmd->add_option("--snapshot-every", flags.snapshot_every, "Snapshot cadence in steps");
  run_cmd->add_option("--strategy", flags.strategy,
                      "quantile | prune_to_mass | fixed_threshold | none");
  run_cmd->add_flag("--override-budget", flags.override_budget,
                    "Run even if the error budget check fails");

  std::string export_model_name;
  std::string export_params = "{}";
  std::string export_out;
  CLI::App* export_cmd =
      app.add_subcommand("export", "Write a builtin model as a config file");
  export_cmd
      ->add_option("-m,--model", export_model_name,
                   "lotka_volterra | michaelis_menten | toggle_switch | birth_death")
      ->required();
  export_cmd->add_option("-p,--params", export_params, "Model parameters as a JSON object");
  export_cmd->add_option("-o,--out", export_out, "Output file (default stdout)");

  std::string budget_config_path;
  CLI::App* budget_cmd =
      app.add_subcommand("budget", "Check the error budget of a config file");
  budget_cmd->add_option("-c,--config", budget_config_path, "Config file (JSON)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      cmefsp::RunConfig config = cmefsp::parse_config(read_file(flags.config_path));
      apply_flags(config, flags);
      return cmefsp::run(config);
    }
    if (export_cmd->parsed()) {
      const cmefsp::BenchmarkModel model =
          cmefsp::builtin_model(export_model_name, export_params);
      const std::string text = cmefsp::export_model_config(model);
      if (export_out.empty()) {
        std::cout << text << '\n';
      } else {
        std::ofstream out(export_out);
        if (!out) throw cmefsp::Error("cannot write " + export_out);
        out << text << '\n';
      }
      return 0;
    }
    if (budget_cmd->parsed()) {
      cmefsp::RunConfig config = cmefsp::parse_config(read_file(budget_config_path));
      const cmefsp::BudgetDecision d = cmefsp::verify_budget(config.solver);
      std::cout << "steps:         " << d.n_steps << '\n'
                << "bound:         " << d.bound << "  (N * (2*alpha + eps_time))\n"
                << "eps_global:    " << d.eps_global << '\n'
                << "slack:         " << d.slack << '\n'
                << "budget:        " << (d.pass ? "PASS" : "FAIL") << '\n'
                << "eps_time<=2a:  " << (d.allocation_ok ? "yes" : "no") << '\n';
      return d.pass ? cmefsp::kExitOk : cmefsp::kExitBudget;
    }
  } catch (const cmefsp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return cmefsp::kExitConfig;
  } catch (const cmefsp::BudgetRefusedError& e) {
    std::cerr << "budget: " << e.what() << '\n';
    return cmefsp::kExitBudget;
  } catch (const cmefsp::CapacityError& e) {
    std::cerr << "capacity: " << e.what() << '\n';
    return cmefsp::kExitCapacity;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
