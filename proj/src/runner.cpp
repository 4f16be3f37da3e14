#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <span>

#include "cmefsp/config.hpp"
#include "cmefsp/ssa.hpp"

namespace cmefsp {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// 17 significant digits: doubles survive the text round trip.
std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open output file " + path.string());
  return out;
}

void write_error_trace(const fs::path& path, const std::vector<StepRecord>& steps) {
  auto out = open_out(path);
  out << "t\tn_states_before\tn_states_after\tpruned_mass\tlocal_bound\texpmv_error"
         "\tcum_bound\n";
  for (const StepRecord& s : steps) {
    out << fmt(s.t) << '\t' << s.n_states_before << '\t' << s.n_states_after << '\t'
        << fmt(s.pruned_mass) << '\t' << fmt(s.local_bound) << '\t' << fmt(s.expmv_error)
        << '\t' << fmt(s.cum_bound) << '\n';
  }
}

void write_state_size(const fs::path& path, const std::vector<StepRecord>& steps) {
  auto out = open_out(path);
  out << "t\tn_states\n";
  for (const StepRecord& s : steps) {
    out << fmt(s.t) << '\t' << s.n_states_after << '\n';
  }
}

void write_snapshots(const fs::path& path, const std::vector<Snapshot>& snapshots) {
  auto out = open_out(path);
  for (const Snapshot& snap : snapshots) {
    out << "{\"t\":" << fmt(snap.t) << ",\"states\":[";
    for (std::size_t i = 0; i < snap.states.size(); ++i) {
      if (i) out << ',';
      out << '[';
      for (std::size_t s = 0; s < snap.states[i].size(); ++s) {
        if (s) out << ',';
        out << snap.states[i][s];
      }
      out << ']';
    }
    out << "],\"probs\":[";
    for (std::size_t i = 0; i < snap.probs.size(); ++i) {
      if (i) out << ',';
      out << fmt(snap.probs[i]);
    }
    out << "]}\n";
  }
}

void write_ssa_compare(const fs::path& path, const ReactionNetwork& network,
                       const SolveResult& result, const EnsembleStats& stats,
                       std::span<const double> display_times) {
  auto out = open_out(path);
  out << "t\tspecies\tfsp_mean\tssa_mean\tssa_sem\n";
  for (std::size_t s = 0; s < network.n_species(); ++s) {
    const std::vector<double> fsp = fsp_mean(result, s);
    for (std::size_t g = 0; g < stats.grid.size(); ++g) {
      out << fmt(display_times[g]) << '\t' << network.species()[s].name << '\t'
          << fmt(fsp[g]) << '\t' << fmt(stats.mean[s][g]) << '\t' << fmt(stats.sem[s][g])
          << '\n';
    }
  }
}

json budget_to_json(const BudgetDecision& b) {
  json obj;
  obj["n_steps"] = b.n_steps;
  obj["bound"] = b.bound;
  obj["eps_global"] = b.eps_global;
  obj["slack"] = b.slack;
  obj["pass"] = b.pass;
  obj["allocation_ok"] = b.allocation_ok;
  return obj;
}

void write_manifest(const fs::path& dir, json manifest) {
  auto out = open_out(dir / "manifest.json");
  out << manifest.dump(2) << '\n';
}

}  // namespace

int run(const RunConfig& config) {
  const auto wall_start = std::chrono::steady_clock::now();
  const fs::path dir(config.output.dir);
  fs::create_directories(dir);

  json manifest;
  manifest["config"] = json::parse(to_json(config));
  manifest["status"] = "failed";

  const BudgetDecision budget = verify_budget(config.solver);
  manifest["budget"] = budget_to_json(budget);
  if (!budget.pass && !config.override_budget) {
    manifest["failure"] = "budget check failed: bound " + fmt(budget.bound) +
                          " exceeds eps_global " + fmt(budget.eps_global);
    write_manifest(dir, std::move(manifest));
    return kExitBudget;
  }

  SolverConfig solver = config.solver;
  if (config.output.ssa.enabled && solver.snapshot_every == 0) {
    // The SSA comparison grid is the snapshot grid; aim for grid_points rows.
    const std::size_t points = std::max<std::size_t>(config.output.ssa.grid_points, 2);
    solver.snapshot_every = std::max<std::size_t>(1, budget.n_steps / (points - 1));
  }

  SolveResult result;
  try {
    result = solve_adaptive(config.network, config.x0, solver, config.override_budget);
  } catch (const SolveFailure& e) {
    if (config.output.error_trace) {
      write_error_trace(dir / "error_trace.tsv", e.partial_trace());
    }
    manifest["failure"] = e.what();
    manifest["wall_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
    write_manifest(dir, std::move(manifest));
    return e.kind() == FailureKind::Capacity ? kExitCapacity : kExitNumerical;
  }

  json outputs = json::array();
  if (config.output.error_trace) {
    write_error_trace(dir / "error_trace.tsv", result.steps);
    outputs.push_back("error_trace.tsv");
  }
  if (config.output.state_size_trace) {
    write_state_size(dir / "state_size.tsv", result.steps);
    outputs.push_back("state_size.tsv");
  }
  if (config.output.snapshots && !result.snapshots.empty()) {
    write_snapshots(dir / "snapshots.jsonl", result.snapshots);
    outputs.push_back("snapshots.jsonl");
  }
  if (config.output.ssa.enabled) {
    // Trajectories run on [0, tf - t0]; the process is time-homogeneous, so
    // snapshot times map to trajectory times by subtracting t0.
    std::vector<double> display_times;
    std::vector<double> grid;
    grid.reserve(result.snapshots.size());
    for (const Snapshot& s : result.snapshots) {
      display_times.push_back(s.t);
      grid.push_back(s.t - config.solver.t0);
    }
    const EnsembleStats stats =
        ensemble_stats(config.network, config.x0, config.solver.t_final - config.solver.t0,
                       grid, config.output.ssa.n, config.output.ssa.seed);
    write_ssa_compare(dir / "ssa_compare.tsv", config.network, result, stats,
                      display_times);
    outputs.push_back("ssa_compare.tsv");
  }

  manifest["status"] = "success";
  manifest["outputs"] = std::move(outputs);
  manifest["n_steps"] = result.steps.size();
  manifest["final_states"] = result.space.size();
  manifest["budget_overridden"] = result.budget_overridden;
  manifest["wall_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  write_manifest(dir, std::move(manifest));
  return kExitOk;
}

}  // namespace cmefsp
